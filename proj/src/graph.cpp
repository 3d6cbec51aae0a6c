#include "opdyn/graph.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "opdyn/error.hpp"

namespace opdyn {

SignedMultigraph::SignedMultigraph(OpinionSpectrum spectrum, Eigen::MatrixXd weights, RelationMatrix relations,
                                   std::map<std::string, DeviationSpec> deviations)
    : spectrum_(std::move(spectrum)),
      weights_(std::move(weights)),
      relations_(std::move(relations)),
      deviations_(std::move(deviations)) {
  if (weights_.rows() != weights_.cols()) throw InputError("weight matrix must be square");
  if (relations_.size() != static_cast<std::size_t>(weights_.rows())) {
    throw InputError("relation matrix must have one row per agent");
  }
  for (const auto& row : relations_) {
    if (row.size() != relations_.size()) throw InputError("relation matrix must be square");
  }
}

const DeviationSpec* SignedMultigraph::deviation(int i, int j) const {
  const Relation& r = relation(i, j);
  if (r.follows()) return nullptr;
  auto it = deviations_.find(r.spec_id());
  return it == deviations_.end() ? nullptr : &it->second;
}

Opinion SignedMultigraph::signal(int i, int j, Opinion x) const {
  const Relation& r = relation(i, j);
  if (r.follows()) return x;
  const DeviationSpec* spec = deviation(i, j);
  if (spec == nullptr) throw InputError("edge references unknown deviation spec '" + r.spec_id() + "'");
  return eval_deviation(*spec, x);
}

SignedMultigraph SignedMultigraph::induced(const AgentSet& agents, bool renormalize) const {
  const int m = static_cast<int>(agents.size());
  for (int a : agents) {
    if (a < 0 || a >= size()) throw InputError("induced subgraph references an unknown agent");
  }
  Eigen::MatrixXd w(m, m);
  RelationMatrix rel(idx(m), std::vector<Relation>(idx(m), Relation::follow()));
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      w(r, c) = weights_(agents[idx(r)], agents[idx(c)]);
      rel[idx(r)][idx(c)] = relation(agents[idx(r)], agents[idx(c)]);
    }
    if (renormalize) {
      const double mass = w.row(r).sum();
      if (mass <= kEdgeThreshold) throw InputError("induced subgraph leaves an agent with no weight");
      w.row(r) /= mass;
    }
  }
  return SignedMultigraph(spectrum_, std::move(w), std::move(rel), deviations_);
}

SignedMultigraph SignedMultigraph::flipped(std::optional<std::string> spec_id) const {
  auto deviations = deviations_;
  std::string id;
  if (spec_id) {
    id = *spec_id;
    if (!deviations.contains(id)) throw InputError("flip references unknown deviation spec '" + id + "'");
  } else {
    std::set<std::string> used;
    for (const auto& row : relations_) {
      for (const auto& r : row) {
        if (r.deviates()) used.insert(r.spec_id());
      }
    }
    if (used.size() > 1) throw InputError("flip needs an explicit spec id when several specs are used");
    if (used.empty()) {
      id = "flip";
      while (deviations.contains(id)) id += "_";
      deviations.emplace(id, DeviationSpec::soft(spectrum_));
    } else {
      id = *used.begin();
    }
  }
  RelationMatrix rel = relations_;
  for (auto& row : rel) {
    for (auto& r : row) r = r.follows() ? Relation::deviate(id) : Relation::follow();
  }
  return SignedMultigraph(spectrum_, weights_, std::move(rel), std::move(deviations));
}

// ---------------------------------------------------------------------------

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::TooFewAgents: return "too_few_agents";
    case Violation::Kind::NonFiniteWeight: return "non_finite_weight";
    case Violation::Kind::NegativeWeight: return "negative_weight";
    case Violation::Kind::RowSum: return "row_sum";
    case Violation::Kind::DanglingSpec: return "dangling_spec";
    case Violation::Kind::SpectrumMismatch: return "spectrum_mismatch";
    case Violation::Kind::InvalidDeviation: return "invalid_deviation";
  }
  return "unknown";
}

bool ValidationReport::has(Violation::Kind kind) const {
  for (const auto& v : violations) {
    if (v.kind == kind) return true;
  }
  return false;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& v : violations) out << to_string(v.kind) << ": " << v.message << '\n';
  return out.str();
}

ValidationReport validate(const SignedMultigraph& g, double row_sum_tol) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, int row, int col, std::string msg) {
    report.violations.push_back({kind, row, col, std::move(msg)});
  };
  const int n = g.size();
  if (n < 2) add(Violation::Kind::TooFewAgents, -1, -1, "at least two agents are required");

  for (int i = 0; i < n; ++i) {
    bool finite = true;
    for (int j = 0; j < n; ++j) {
      const double w = g.weight(i, j);
      if (!std::isfinite(w)) {
        finite = false;
        add(Violation::Kind::NonFiniteWeight, i, j, "W(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not finite");
      } else if (w < 0.0) {
        add(Violation::Kind::NegativeWeight, i, j, "W(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is negative");
      }
    }
    if (finite) {
      const double sum = g.weights().row(i).sum();
      if (std::abs(sum - 1.0) > row_sum_tol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "row " << i + 1 << " sums to " << sum;
        add(Violation::Kind::RowSum, i, -1, msg.str());
      }
    }
  }

  for (const auto& [id, spec] : g.deviations()) {
    if (!(spec.spectrum() == g.spectrum())) {
      add(Violation::Kind::SpectrumMismatch, -1, -1, "deviation spec '" + id + "' is bound to another spectrum");
    }
  }

  std::set<std::string> reported;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Relation& r = g.relation(i, j);
      if (r.follows() || reported.contains(r.spec_id())) continue;
      auto it = g.deviations().find(r.spec_id());
      if (it == g.deviations().end()) {
        add(Violation::Kind::DanglingSpec, i, j, "edge references unknown deviation spec '" + r.spec_id() + "'");
        reported.insert(r.spec_id());
      } else if (it->second.acts_as_identity()) {
        add(Violation::Kind::InvalidDeviation, i, j,
            "deviation spec '" + r.spec_id() + "' is the identity and cannot be used to deviate");
        reported.insert(r.spec_id());
      }
    }
  }
  return report;
}

AgentSet all_agents(int n) {
  AgentSet out(static_cast<std::size_t>(n));
  std::iota(out.begin(), out.end(), 0);
  return out;
}

AgentSet in_group(const SignedMultigraph& g, int i) {
  AgentSet out;
  for (int j = 0; j < g.size(); ++j) {
    if (g.relation(i, j).follows()) out.push_back(j);
  }
  return out;
}

AgentSet out_group(const SignedMultigraph& g, int i) {
  AgentSet out;
  for (int j = 0; j < g.size(); ++j) {
    if (g.relation(i, j).deviates()) out.push_back(j);
  }
  return out;
}

double weight_mass(const SignedMultigraph& g, int i, const AgentSet& agents) {
  double sum = 0.0;
  for (int j : agents) sum += g.weight(i, j);
  return sum;
}

double out_weight(const SignedMultigraph& g, int i) { return weight_mass(g, i, out_group(g, i)); }

SslsCheck is_sslss(const SignedMultigraph& g) {
  SslsCheck check;
  if (!validate(g).ok()) check.reasons.push_back("graph is not valid");
  const OpinionSpectrum& s = g.spectrum();
  if (s.is_discrete() || !s.is_symmetric()) {
    check.reasons.push_back("spectrum is not a symmetric interval or the real line");
  }
  const int n = g.size();
  for (int i = 0; i < n; ++i) {
    if (g.has_edge(i, i)) check.reasons.push_back("agent " + std::to_string(i + 1) + " has a self-loop");
  }
  std::set<std::string> non_soft;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!g.has_edge(i, j) || g.relation(i, j).follows()) continue;
      const DeviationSpec* spec = g.deviation(i, j);
      double slope = 0.0;
      double intercept = 0.0;
      const bool soft = spec != nullptr && spec->affine_form(slope, intercept) && slope == -1.0 &&
                        intercept == 0.0;
      if (!soft) non_soft.insert(g.relation(i, j).spec_id());
    }
  }
  for (const auto& id : non_soft) check.reasons.push_back("deviation spec '" + id + "' is not soft opposition");

  auto signed_entry = [&](int i, int j) {
    if (!g.has_edge(i, j)) return 0.0;
    return g.relation(i, j).follows() ? g.weight(i, j) : -g.weight(i, j);
  };
  bool symmetric = true;
  for (int i = 0; i < n && symmetric; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(signed_entry(i, j) - signed_entry(j, i)) > 1e-12) {
        symmetric = false;
        break;
      }
    }
  }
  if (!symmetric) check.reasons.push_back("signed weight matrix A is not symmetric");
  check.ok = check.reasons.empty();
  return check;
}

}  // namespace opdyn
