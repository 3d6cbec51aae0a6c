#include "opdyn/equilibria.hpp"

#include <cmath>
#include <sstream>

#include "opdyn/error.hpp"

namespace opdyn {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

// The one deviation function used on W>0 deviate edges anywhere in g.
const DeviationSpec* single_spec(const SignedMultigraph& g) {
  const DeviationSpec* found = nullptr;
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.size(); ++j) {
      if (!g.has_edge(i, j) || g.relation(i, j).follows()) continue;
      const DeviationSpec* spec = g.deviation(i, j);
      if (spec == nullptr) throw InputError("edge references unknown deviation spec '" + g.relation(i, j).spec_id() + "'");
      if (found != nullptr && !(*found == *spec)) throw InputError("construction needs a single deviation function");
      found = spec;
    }
  }
  return found;
}

void require_full_cover(const SignedMultigraph& g, const BipartitionCertificate& cert) {
  if (static_cast<int>(cert.side.size()) != g.size()) throw InputError("certificate size does not match the graph");
  for (int side : cert.side) {
    if (side != 1 && side != 2) throw InputError("certificate must assign every agent to a side");
  }
}

void require_opposing(const SignedMultigraph& g, Opinion x, Opinion y) {
  const DeviationSpec* spec = single_spec(g);
  if (!g.spectrum().contains(x) || !g.spectrum().contains(y)) throw InputError("opinions lie outside the spectrum");
  if (spec != nullptr && !are_opposing_viewpoints(*spec, x, y)) {
    throw InputError(g.spectrum().format(x) + " and " + g.spectrum().format(y) + " are not opposing viewpoints");
  }
}

OpinionVector by_side(const BipartitionCertificate& cert, Opinion x, Opinion y) {
  OpinionVector p(cert.side.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = cert.side[i] == 1 ? x : y;
  return p;
}

bool same_state(const SignedMultigraph& g, const OpinionVector& a, const OpinionVector& b, double tol) {
  if (g.spectrum().is_discrete()) return a == b;
  return max_abs_diff(a, b) <= tol;
}

}  // namespace

const DeviationSpec* agent_deviation(const SignedMultigraph& g, int i) {
  const DeviationSpec* found = nullptr;
  for (int j = 0; j < g.size(); ++j) {
    if (!g.has_edge(i, j) || g.relation(i, j).follows()) continue;
    const DeviationSpec* spec = g.deviation(i, j);
    if (spec == nullptr) throw InputError("edge references unknown deviation spec '" + g.relation(i, j).spec_id() + "'");
    if (found != nullptr && !(*found == *spec)) {
      throw Unavailable("agent " + std::to_string(i + 1) +
                        " applies different deviation functions to different neighbors; no consensus "
                        "characterization exists");
    }
    found = spec;
  }
  return found;
}

ConsensusCharacterization consensus_fixed_points(const SignedMultigraph& g, UpdateRule rule) {
  ConsensusCharacterization out;
  out.threshold = rule == UpdateRule::Discrete ? 0.5 : 0.0;
  std::vector<const DeviationSpec*> per_agent;
  for (int i = 0; i < g.size(); ++i) per_agent.push_back(agent_deviation(g, i));

  out.admissible = FixedPointSet::whole(g.spectrum());
  for (int i = 0; i < g.size(); ++i) {
    // same tolerance as the majority tie rule
    if (out_weight(g, i) <= out.threshold + kScoreTieTolerance) continue;
    out.strong_out_agents.push_back(i);
    if (per_agent[at(i)] != nullptr) out.admissible = out.admissible.intersect(fixed_points(*per_agent[at(i)]));
  }
  out.persistent_disagreement = out.admissible.is_empty();
  return out;
}

ConsensusCharacterization consensus_fixed_points(const SignedMultigraph& g) {
  return consensus_fixed_points(g, natural_rule(g));
}

bool is_fixed_point(const SignedMultigraph& g, const OpinionVector& b, UpdateRule rule, double tol, TieRule tie) {
  const OpinionVector next = step(g, b, rule, tie);
  if (rule == UpdateRule::Discrete) return next == b;
  return max_abs_diff(next, b) <= tol;
}

bool is_fixed_point(const SignedMultigraph& g, const OpinionVector& b) {
  return is_fixed_point(g, b, natural_rule(g));
}

OpinionVector build_polarization(const SignedMultigraph& g, const BipartitionCertificate& cert, Opinion x, Opinion y) {
  if (cert.kind != BipartitionKind::Opposition) throw InputError("polarization needs an opposition certificate");
  require_full_cover(g, cert);
  if (!certificate_holds(g, cert)) throw InputError("certificate does not hold for this graph");
  require_opposing(g, x, y);
  OpinionVector p = by_side(cert, x, y);
  if (!is_fixed_point(g, p)) throw InputError("constructed polarization is not a fixed point");
  return p;
}

OpinionVector build_multipolarization(const SignedMultigraph& g, const std::vector<AgentSet>& partition,
                                      const std::vector<Opinion>& targets) {
  if (targets.size() != partition.size()) throw InputError("need one target opinion per group");
  if (!verify_k_partition(g, partition)) throw InputError("partition is not an opposition partition of the graph");
  for (Opinion t : targets) {
    if (!g.spectrum().contains(t)) throw InputError("target opinion lies outside the spectrum");
  }

  std::vector<int> group(at(g.size()), -1);
  OpinionVector p(at(g.size()));
  for (std::size_t k = 0; k < partition.size(); ++k) {
    for (int a : partition[k]) {
      group[at(a)] = static_cast<int>(k);
      p[at(a)] = targets[k];
    }
  }
  const OpinionSpectrum& s = g.spectrum();
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.size(); ++j) {
      if (!g.has_edge(i, j) || g.relation(i, j).follows()) continue;
      const auto gi = at(group[at(i)]);
      const auto gj = at(group[at(j)]);
      const Opinion image = g.signal(i, j, targets[gj]);
      const bool ok = s.is_discrete() ? image == targets[gi] : std::abs(image - targets[gi]) <= kOpinionTolerance;
      if (!ok) {
        std::ostringstream msg;
        msg << "deviation of agent " << i + 1 << " (group " << gi + 1 << ") toward agent " << j + 1 << " (group "
            << gj + 1 << ") maps " << s.format(targets[gj]) << " to " << s.format(image) << ", expected "
            << s.format(targets[gi]);
        throw InputError(msg.str());
      }
    }
  }
  if (!is_fixed_point(g, p)) throw InputError("constructed multipolarization is not a fixed point");
  return p;
}

std::pair<OpinionVector, OpinionVector> build_oscillation_pair(const SignedMultigraph& g,
                                                              const BipartitionCertificate& cert, Opinion x,
                                                              Opinion y) {
  if (cert.kind != BipartitionKind::ReverseOpposition) {
    throw InputError("oscillation pair needs a reverse opposition certificate");
  }
  require_full_cover(g, cert);
  if (!certificate_holds(g, cert)) throw InputError("certificate does not hold for this graph");
  require_opposing(g, x, y);
  OpinionVector p = by_side(cert, x, y);
  OpinionVector q = by_side(cert, y, x);
  const UpdateRule rule = natural_rule(g);
  if (!same_state(g, step(g, p, rule), q, 1e-10) || !same_state(g, step(g, q, rule), p, 1e-10)) {
    throw InputError("constructed pair is not a two-step orbit");
  }
  return {std::move(p), std::move(q)};
}

std::vector<OpinionVector> brute_force_fixed_points(const SignedMultigraph& g, TieRule tie) {
  if (!g.spectrum().is_discrete()) throw WrongRule("fixed points can only be enumerated on a discrete spectrum");
  const int n = g.size();
  const int k = g.spectrum().size();
  const double states = std::pow(static_cast<double>(k), n);
  if (states > kBruteForceLimit) {
    std::ostringstream msg;
    msg << "state space has " << k << "^" << n << " = " << states << " vectors, above the limit of "
        << kBruteForceLimit;
    throw BoundExceeded(msg.str());
  }
  std::vector<OpinionVector> out;
  OpinionVector b(at(n), 0.0);
  while (true) {
    if (step_discrete(g, b, tie) == b) out.push_back(b);
    int pos = n - 1;
    while (pos >= 0 && b[at(pos)] == k - 1) b[at(pos--)] = 0.0;
    if (pos < 0) break;
    b[at(pos)] += 1.0;
  }
  return out;
}

std::string_view to_string(WisdomVerdict verdict) {
  switch (verdict) {
    case WisdomVerdict::NeverWise: return "never_wise";
    case WisdomVerdict::WiseForAllB0: return "wise_for_all_b0";
    case WisdomVerdict::ConditionallyWise: return "conditionally_wise";
  }
  return "unknown";
}

WisdomVerdict wisdom_verdict(const SignedMultigraph& g, Opinion mu, UpdateRule rule) {
  if (!g.spectrum().contains(mu)) throw InputError("mu lies outside the spectrum");
  const ConsensusCharacterization c = consensus_fixed_points(g, rule);
  if (!c.admissible.contains(mu)) return WisdomVerdict::NeverWise;
  if (rule == UpdateRule::Continuous && std::abs(mu) <= kOpinionTolerance && is_sslss(g) &&
      is_strongly_connected(g, all_agents(g.size())) && !opposition_bipartition(g) &&
      !reverse_opposition_bipartition(g)) {
    return WisdomVerdict::WiseForAllB0;
  }
  return WisdomVerdict::ConditionallyWise;
}

}  // namespace opdyn
