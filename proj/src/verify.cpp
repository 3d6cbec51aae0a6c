#include "opdyn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>

#include "opdyn/analysis.hpp"
#include "opdyn/equilibria.hpp"
#include "opdyn/error.hpp"
#include "opdyn/spectral.hpp"

namespace opdyn {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p) { return uniform(rng, 0.0, 1.0) < p; }

bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(at(n));
  for (int i = 0; i < n; ++i) parent[at(i)] = i;
  auto find = [&](int x) {
    while (parent[at(x)] != x) x = parent[at(x)] = parent[at(parent[at(x)])];
    return x;
  };
  int components = n;
  for (auto [a, b] : edges) {
    const int ra = find(a);
    const int rb = find(b);
    if (ra != rb) {
      parent[at(ra)] = rb;
      --components;
    }
  }
  return components == 1;
}

// Symmetric Sinkhorn scaling M_ij /= sqrt(r_i r_j). Converges to a doubly
// stochastic matrix exactly when the support has total support.
bool symmetric_sinkhorn(Eigen::MatrixXd& m) {
  for (int it = 0; it < 5000; ++it) {
    const Eigen::VectorXd r = m.rowwise().sum();
    if ((r.array() - 1.0).abs().maxCoeff() < 1e-13) return true;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (m(i, j) != 0.0) m(i, j) /= std::sqrt(r(i) * r(j));
      }
    }
  }
  return false;
}

std::string format_vector(const OpinionSpectrum& s, const OpinionVector& b) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < b.size(); ++i) out << (i ? ", " : "") << s.format(b[i]);
  out << ')';
  return out.str();
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string_view to_string(SignRegime regime) {
  switch (regime) {
    case SignRegime::Uniform: return "uniform";
    case SignRegime::Opposition: return "opposition";
    case SignRegime::Reverse: return "reverse";
    case SignRegime::Imbalanced: return "imbalanced";
  }
  return "unknown";
}

SignedMultigraph random_sslss(int n, double density, double sign_prob, SignRegime regime, Rng& rng) {
  if (n < 2) throw InputError("random graphs need at least two agents");
  if (!(density > 0.0) || density > 1.0) throw InputError("density must lie in (0, 1]");
  if (sign_prob < 0.0 || sign_prob > 1.0) throw InputError("sign probability must lie in [0, 1]");
  const OpinionSpectrum s = OpinionSpectrum::interval(-1.0, 1.0);

  for (int attempt = 0; attempt < 100'000; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (coin(rng, density)) edges.emplace_back(i, j);
      }
    }
    if (!connected(n, edges)) continue;

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (auto [i, j] : edges) m(i, j) = m(j, i) = uniform(rng, 0.1, 1.0);
    if (!symmetric_sinkhorn(m)) continue;
    bool degenerate = false;
    for (auto [i, j] : edges) {
      m(j, i) = m(i, j);
      if (m(i, j) < 1e-6) degenerate = true;
    }
    if (degenerate) continue;

    std::vector<int> side(at(n));
    for (int& x : side) x = coin(rng, 0.5) ? 1 : 2;
    auto build = [&](const std::vector<char>& deviate) {
      RelationMatrix rel(at(n), std::vector<Relation>(at(n), Relation::follow()));
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (!deviate[e]) continue;
        const auto [i, j] = edges[e];
        rel[at(i)][at(j)] = rel[at(j)][at(i)] = Relation::deviate("D");
      }
      return SignedMultigraph(s, m, std::move(rel), {{"D", DeviationSpec::soft(s)}});
    };

    std::vector<char> deviate(edges.size());
    auto draw_uniform = [&] {
      for (auto&& d : deviate) d = coin(rng, sign_prob);
    };
    switch (regime) {
      case SignRegime::Uniform: draw_uniform(); break;
      case SignRegime::Opposition:
      case SignRegime::Reverse:
        for (std::size_t e = 0; e < edges.size(); ++e) {
          const bool across = side[at(edges[e].first)] != side[at(edges[e].second)];
          deviate[e] = (regime == SignRegime::Opposition) == across;
        }
        break;
      case SignRegime::Imbalanced:
        // some supports (single edges, trees) cannot be imbalanced; keep the last draw then
        for (int tries = 0; tries < 100; ++tries) {
          draw_uniform();
          const SignedMultigraph g = build(deviate);
          if (!opposition_bipartition(g) && !reverse_opposition_bipartition(g)) break;
        }
        break;
    }
    return build(deviate);
  }
  throw Error("could not sample a connected symmetric graph");
}

SignedMultigraph random_sslss(int n, double density, double sign_prob, std::uint64_t seed) {
  Rng rng(seed);
  return random_sslss(n, density, sign_prob, SignRegime::Uniform, rng);
}

SignedMultigraph random_continuous_graph(int n, Rng& rng) {
  if (n < 2) throw InputError("random graphs need at least two agents");
  const OpinionSpectrum s = OpinionSpectrum::interval(-1.0, 1.0);
  std::map<std::string, DeviationSpec> specs;
  specs.emplace("soft", DeviationSpec::soft(s));
  specs.emplace("hard", DeviationSpec::hard(s, coin(rng, 0.5)));
  const double a = uniform(rng, -1.0, 0.9);
  const double slack = 1.0 - std::abs(a);
  specs.emplace("affine", DeviationSpec::affine(s, a, uniform(rng, -slack, slack)));
  specs.emplace("constant", DeviationSpec::constant(s, uniform(rng, -1.0, 1.0)));
  specs.emplace("power", DeviationSpec::signed_power(s, uniform(rng, 0.3, 3.0)));
  const std::vector<std::string> ids{"soft", "hard", "affine", "constant", "power"};

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  RelationMatrix rel(at(n), std::vector<Relation>(at(n), Relation::follow()));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || !coin(rng, 0.7)) continue;
      w(i, j) = uniform(rng, 0.05, 1.0);
      if (coin(rng, 0.5)) rel[at(i)][at(j)] = Relation::deviate(ids[at(uniform_int(rng, 0, 4))]);
    }
    if (w.row(i).sum() == 0.0) {
      int j = uniform_int(rng, 0, n - 2);
      if (j >= i) ++j;
      w(i, j) = 1.0;
    }
    w.row(i) /= w.row(i).sum();
  }
  return SignedMultigraph(s, std::move(w), std::move(rel), std::move(specs));
}

SignedMultigraph random_discrete_graph(bool zero_diagonal, Rng& rng) {
  const int n = uniform_int(rng, 2, 3);
  const int k = uniform_int(rng, 2, 3);
  std::vector<std::string> labels;
  for (int i = 0; i < k; ++i) labels.push_back(std::string(1, static_cast<char>('A' + i)));
  const OpinionSpectrum s = OpinionSpectrum::discrete(labels);

  std::map<std::string, DeviationSpec> specs;
  for (int i = 0; i < n; ++i) {
    const std::string id = "D" + std::to_string(i + 1);
    switch (uniform_int(rng, 0, 3)) {
      case 0: specs.emplace(id, DeviationSpec::soft(s)); break;
      case 1: specs.emplace(id, DeviationSpec::hard(s, coin(rng, 0.5))); break;
      case 2: specs.emplace(id, DeviationSpec::constant(s, uniform_int(rng, 0, k - 1))); break;
      default: {
        std::vector<int> map(at(k));
        bool identity = true;
        while (identity) {
          for (int& m : map) m = uniform_int(rng, 0, k - 1);
          identity = true;
          for (int x = 0; x < k; ++x) identity = identity && map[at(x)] == x;
        }
        specs.emplace(id, DeviationSpec::table(s, map));
      }
    }
  }

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  RelationMatrix rel(at(n), std::vector<Relation>(at(n), Relation::follow()));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (zero_diagonal && i == j) continue;
      w(i, j) = uniform_int(rng, 0, 3);
      if (i != j && coin(rng, 0.5)) rel[at(i)][at(j)] = Relation::deviate("D" + std::to_string(i + 1));
    }
    if (w.row(i).sum() == 0.0) {
      int j = uniform_int(rng, 0, n - 2);
      if (j >= i) ++j;
      w(i, j) = 1.0;
    }
    w.row(i) /= w.row(i).sum();
  }
  return SignedMultigraph(s, std::move(w), std::move(rel), std::move(specs));
}

OpinionVector random_opinions(const OpinionSpectrum& s, int n, Rng& rng) {
  OpinionVector b(at(n));
  for (auto& x : b) {
    if (s.is_discrete()) {
      x = uniform_int(rng, 0, s.size() - 1);
    } else if (s.is_bounded()) {
      x = uniform(rng, s.lo(), s.hi());
    } else {
      x = uniform(rng, -1.0, 1.0);
    }
  }
  return b;
}

double best_response_continuous(const SignedMultigraph& g, const OpinionVector& b, int i) {
  auto u = [&](double x) {
    OpinionVector c = b;
    c[at(i)] = x;
    return utility_continuous(g, c, i);
  };
  const double fm = u(-1.0);
  const double f0 = u(0.0);
  const double fp = u(1.0);
  const double curvature = fm - 2.0 * f0 + fp;
  if (curvature >= 0.0) throw InputError("utility is not strictly concave; agent has no neighbors");
  return (fm - fp) / (2.0 * curvature);
}

std::vector<int> best_responses_discrete(const SignedMultigraph& g, const OpinionVector& b, int i) {
  std::vector<double> u;
  for (int k = 0; k < g.spectrum().size(); ++k) {
    OpinionVector c = b;
    c[at(i)] = k;
    u.push_back(utility_discrete(g, c, i));
  }
  const double best = *std::max_element(u.begin(), u.end());
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(u.size()); ++k) {
    if (u[at(k)] >= best - kScoreTieTolerance) out.push_back(k);
  }
  return out;
}

int AgreementReport::failures(const std::string& property) const {
  auto it = properties.find(property);
  return it == properties.end() ? 0 : it->second.fail;
}

int AgreementReport::passes(const std::string& property) const {
  auto it = properties.find(property);
  return it == properties.end() ? 0 : it->second.pass;
}

namespace {

struct TrialResult {
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<Counterexample> failures;
  std::string verdict;
};

class Recorder {
 public:
  Recorder(TrialResult& out, int trial) : out_(out), trial_(trial) {}

  void check(const std::string& property, bool ok, const SignedMultigraph& g, const OpinionVector& b0,
             const std::string& detail) {
    out_.checks.emplace_back(property, ok);
    if (ok) return;
    Scenario sc{"counterexample_" + property + "_trial_" + std::to_string(trial_), g, b0};
    out_.failures.push_back({property, trial_, detail, scenario_to_json(sc)});
  }

 private:
  TrialResult& out_;
  int trial_;
};

Rng trial_rng(const TrialConfig& config, int trial) {
  return Rng(splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(trial) + 1)));
}

void continuous_trial(const TrialConfig& config, int trial, TrialResult& out) {
  Recorder rec(out, trial);
  Rng rng = trial_rng(config, trial);
  const auto regime = static_cast<SignRegime>(trial % 4);
  const int n = uniform_int(rng, config.n_min, config.n_max);
  const SignedMultigraph g = random_sslss(n, config.density, config.sign_prob, regime, rng);
  std::vector<OpinionVector> b0s;
  for (int k = 0; k < config.b0_samples; ++k) b0s.push_back(random_opinions(g.spectrum(), n, rng));
  const OpinionVector none;
  const OpinionVector& first = b0s.empty() ? none : b0s.front();
  const Tolerances& tol = config.tol;

  const AgentSet everyone = all_agents(n);
  const auto opp = opposition_bipartition(g);
  const auto rev = reverse_opposition_bipartition(g);
  const int per = period(g, everyone);

  rec.check("certificate_soundness", (!opp || certificate_holds(g, *opp)) && (!rev || certificate_holds(g, *rev)), g,
            first, "returned certificate violates its own definition");

  const SignedMultigraph flip = g.flipped();
  const bool inverse_ok = opp.has_value() == reverse_opposition_bipartition(flip).has_value() &&
                          rev.has_value() == opposition_bipartition(flip).has_value();
  rec.check("lemma_inverse", inverse_ok, g, first, "bipartition existence not mirrored by the flipped graph");

  const bool construction_ok = per == 2 ? opp.has_value() == rev.has_value() : !(opp && rev);
  rec.check("lemma_construction", construction_ok, g, first,
            "period " + std::to_string(per) + ", opposition " + std::to_string(opp.has_value()) + ", reverse " +
                std::to_string(rev.has_value()));

  const AffineRep rep = affine_representation(g);
  const SymmetricEigen eig = eigen_symmetric(rep.A);
  const bool has1 = has_eigenvalue(eig, 1.0, tol.eigen);
  const bool hasm1 = has_eigenvalue(eig, -1.0, tol.eigen);
  rec.check("lemma_1in_a", has1 == opp.has_value() && hasm1 == rev.has_value(), g, first,
            "eigenvalue 1: " + std::to_string(has1) + ", -1: " + std::to_string(hasm1) + ", opposition " +
                std::to_string(opp.has_value()) + ", reverse " + std::to_string(rev.has_value()));

  const Eigen::MatrixXd abs_a = rep.A.cwiseAbs();
  const auto gauge = gauge_matrix(g);
  bool dad_ok = gauge.has_value() == opp.has_value();
  if (gauge) {
    const Eigen::MatrixXd d = gauge->delta();
    dad_ok = dad_ok && (d * rep.A * d - abs_a).cwiseAbs().maxCoeff() <= 1e-12;
  }
  rec.check("lemma_dad", dad_ok, g, first, "gauge matrix existence or identity disagrees with the certificate");
  if (gauge) {
    const SymmetricEigen eig_abs = eigen_symmetric(abs_a);
    const double gap = (eig.values - eig_abs.values).cwiseAbs().maxCoeff();
    rec.check("lemma_similarity", gap <= tol.eigen, g, first, "spectra of A and |A| differ by " + std::to_string(gap));
  }

  const SpectralRadius rho = spectral_radius(rep.A);
  rec.check("schur_bound",
            rho.value <= infinity_norm(rep.A) + 1e-12 && spectral_radius(abs_a).value <= infinity_norm(abs_a) + 1e-12,
            g, first, "spectral radius exceeds the max absolute row sum");

  double fidelity = 0.0;
  for (int k = 0; k < 100; ++k) {
    const OpinionVector x = random_opinions(g.spectrum(), n, rng);
    const Eigen::VectorXd ax = rep.apply(Eigen::Map<const Eigen::VectorXd>(x.data(), n));
    const OpinionVector next = step_continuous(g, x);
    for (int i = 0; i < n; ++i) fidelity = std::max(fidelity, std::abs(ax(i) - next[at(i)]));
  }
  rec.check("representation_fidelity", fidelity <= tol.fidelity, g, first,
            "Ax+d differs from the update by " + std::to_string(fidelity));

  double br_gap = 0.0;
  for (const auto& b : b0s) {
    const OpinionVector next = step_continuous(g, b);
    for (int i = 0; i < n; ++i) br_gap = std::max(br_gap, std::abs(next[at(i)] - best_response_continuous(g, b, i)));
  }
  rec.check("best_response_continuous", br_gap <= tol.best_response, g, first,
            "update differs from the utility maximizer by " + std::to_string(br_gap));

  const ClassificationResult cls = classify(g);
  std::optional<Verdict> verdict;
  if (cls.groups.size() == 1 && cls.rest.empty()) verdict = cls.groups.front().verdict;
  out.verdict = verdict ? std::string(to_string(*verdict)) : "none";
  const bool spectral_agrees = verdict && ((*verdict == Verdict::Polarizes && has1 && !hasm1) ||
                                           (*verdict == Verdict::Diverges && hasm1) ||
                                           (*verdict == Verdict::NeutralConsensus && !has1 && !hasm1));
  rec.check("mainmain_spectral", spectral_agrees, g, first,
            "verdict " + out.verdict + " vs eigenvalue 1: " + std::to_string(has1) + ", -1: " + std::to_string(hasm1));

  std::optional<InfluenceReport> influence;
  if (verdict == Verdict::Polarizes) {
    influence = influence_report(g);
    double s_gap = 0.0;
    for (double si : influence->s) s_gap = std::max(s_gap, std::abs(si - 1.0 / n));
    rec.check("influence_uniform", s_gap <= 1e-10, g, first, "influence vector is not uniform");
  }

  SimulationOptions opt;
  opt.tol = tol.simulation;
  const bool predicted_convergent = rho.value < 1.0 - tol.eigen || (has1 && !hasm1);
  bool all_converged = true;
  for (const auto& b0 : b0s) {
    const Simulation sim = simulate(g, b0, opt);
    const LimitReport& r = sim.report;
    all_converged = all_converged && r.converged();
    std::string detail = "verdict " + out.verdict + ", simulation " + std::string(r.status_name());
    bool ok = false;
    if (verdict == Verdict::Polarizes && r.converged()) {
      const auto& limit = std::get<Converged>(r.status).limit;
      const auto signs = opp->signs();
      double a = 0.0;
      for (int i = 0; i < n; ++i) a += signs[at(i)] * limit[at(i)];
      a /= n;
      double gap = 0.0;
      for (int i = 0; i < n; ++i) gap = std::max(gap, std::abs(limit[at(i)] - signs[at(i)] * a));
      ok = gap <= tol.limit;
      detail += ", distance from the certified split " + std::to_string(gap);

      const OpinionVector predicted = influence->predicted_limit(b0);
      const double err = max_abs_diff(predicted, limit);
      rec.check("influence_formula", err <= tol.limit, g, b0,
                "limit " + format_vector(g.spectrum(), limit) + " vs predicted " +
                    format_vector(g.spectrum(), predicted));
    } else if (verdict == Verdict::NeutralConsensus && r.converged()) {
      const auto& limit = std::get<Converged>(r.status).limit;
      double gap = 0.0;
      for (double x : limit) gap = std::max(gap, std::abs(x));
      ok = gap <= tol.limit;
      detail += ", distance from zero " + std::to_string(gap);
    } else if (verdict == Verdict::Diverges && r.oscillating()) {
      ok = std::get<Oscillating>(r.status).period == 2;
      detail += ", period " + std::to_string(std::get<Oscillating>(r.status).period);
    }
    rec.check("mainmain_simulation", ok, g, b0, detail);

    if (r.converged()) {
      const auto& limit = std::get<Converged>(r.status).limit;
      double gap = 0.0;
      for (int i = 0; i < n; ++i) gap = std::max(gap, std::abs(best_response_continuous(g, limit, i) - limit[at(i)]));
      rec.check("nash_consistency", gap <= tol.limit, g, b0,
                "an agent gains " + std::to_string(gap) + " by deviating at the limit");
    }
  }
  if (!b0s.empty()) {
    rec.check("spectral_consistency", predicted_convergent == all_converged, g, first,
              "rho " + std::to_string(rho.value) + ", predicted convergent " + std::to_string(predicted_convergent) +
                  ", simulated convergent " + std::to_string(all_converged));
  }

  bool built = true;
  std::string why;
  try {
    if (opp) build_polarization(g, *opp, 1.0, -1.0);
    if (rev) build_oscillation_pair(g, *rev, 1.0, -1.0);
  } catch (const Error& e) {
    built = false;
    why = e.what();
  }
  rec.check("equilibrium_construction", built, g, first, why);
}

void discrete_trial(const TrialConfig& config, int trial, TrialResult& out) {
  Recorder rec(out, trial);
  Rng rng = trial_rng(config, trial);
  const bool zero_diagonal = trial % 2 == 0;
  const SignedMultigraph g = random_discrete_graph(zero_diagonal, rng);
  const OpinionSpectrum& s = g.spectrum();
  const int n = g.size();
  const int k = s.size();
  out.verdict = "discrete";

  const auto fixed = brute_force_fixed_points(g);
  const std::set<OpinionVector> fixed_set(fixed.begin(), fixed.end());
  const ConsensusCharacterization cc = consensus_fixed_points(g, UpdateRule::Discrete);
  SimulationOptions opt;
  opt.rule = UpdateRule::Discrete;

  OpinionVector b0(at(n), 0.0);
  bool lim_ok = true;
  bool consensus_ok = true;
  OpinionVector lim_bad;
  OpinionVector consensus_bad;
  while (true) {
    const Simulation sim = simulate(g, b0, opt);
    if (sim.report.converged()) {
      const auto& limit = std::get<Converged>(sim.report.status).limit;
      if (!fixed_set.contains(limit) && lim_ok) {
        lim_ok = false;
        lim_bad = b0;
      }
      const bool consensus = std::all_of(limit.begin(), limit.end(), [&](double x) { return x == limit.front(); });
      if (consensus && !cc.admissible.contains(limit.front()) && consensus_ok) {
        consensus_ok = false;
        consensus_bad = b0;
      }
    }
    int pos = n - 1;
    while (pos >= 0 && b0[at(pos)] == k - 1) b0[at(pos--)] = 0.0;
    if (pos < 0) break;
    b0[at(pos)] += 1.0;
  }
  rec.check("lim_eq_fix", lim_ok, g, lim_bad, "a simulated limit is not among the enumerated fixed points");
  rec.check("consensus_admissible", consensus_ok, g, consensus_bad,
            "a consensus limit lies outside the admissible consensus set");

  bool forward_ok = true;
  std::string forward_detail;
  for (int c = 0; c < k; ++c) {
    bool fixed_by_all = true;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (g.has_edge(i, j) && g.signal(i, j, c) != c) fixed_by_all = false;
      }
    }
    if (fixed_by_all && !fixed_set.contains(OpinionVector(at(n), c))) {
      forward_ok = false;
      forward_detail = "consensus on " + s.label(c) + " is fixed by every relation but is not a fixed point";
    }
  }
  rec.check("consensus_forward", forward_ok, g, {}, forward_detail);

  if (zero_diagonal) {
    bool br_ok = true;
    OpinionVector bad;
    for (int sample = 0; sample < std::max(config.b0_samples, 1); ++sample) {
      const OpinionVector b = random_opinions(s, n, rng);
      const OpinionVector next = step_discrete(g, b);
      for (int i = 0; i < n && br_ok; ++i) {
        const auto best = best_responses_discrete(g, b, i);
        if (std::find(best.begin(), best.end(), static_cast<int>(next[at(i)])) == best.end()) {
          br_ok = false;
          bad = b;
        }
      }
    }
    rec.check("best_response_discrete", br_ok, g, bad, "an agent's update is not a utility maximizer");
  }
}

void run_one(const TrialConfig& config, int trial, TrialResult& out) {
  try {
    if (config.rule == UpdateRule::Continuous) {
      continuous_trial(config, trial, out);
    } else {
      discrete_trial(config, trial, out);
    }
  } catch (const std::exception& e) {
    out.checks.emplace_back("trial_error", false);
    out.failures.push_back({"trial_error", trial, e.what(), json(nullptr)});
  }
}

}  // namespace

AgreementReport run_trials(const TrialConfig& config) {
  if (config.n_min < 2 || config.n_max < config.n_min) throw InputError("need 2 <= n_min <= n_max");
  if (config.trials < 0 || config.b0_samples < 0) throw InputError("trial counts must be non-negative");
  if (config.density < 0.0 || config.density > 1.0 || config.sign_prob < 0.0 || config.sign_prob > 1.0) {
    throw InputError("density and sign probability must lie in [0, 1]");
  }

  std::vector<int> indices;
  if (config.only_trial) {
    indices.push_back(*config.only_trial);
  } else {
    for (int t = 0; t < config.trials; ++t) indices.push_back(t);
  }
  std::vector<TrialResult> results(indices.size());

  int threads = config.threads > 0 ? config.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(1, static_cast<int>(indices.size())));
  auto worker = [&](int offset) {
    for (std::size_t k = at(offset); k < indices.size(); k += at(threads)) run_one(config, indices[k], results[k]);
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }

  AgreementReport report;
  report.trials = static_cast<int>(indices.size());
  for (auto& r : results) {
    for (const auto& [name, ok] : r.checks) {
      auto& tally = report.properties[name];
      (ok ? tally.pass : tally.fail) += 1;
    }
    if (!r.verdict.empty()) report.verdicts[r.verdict] += 1;
    for (auto& c : r.failures) report.counterexamples.push_back(std::move(c));
  }
  return report;
}

json config_to_json(const TrialConfig& config) {
  json out{{"n_min", config.n_min},
           {"n_max", config.n_max},
           {"density", config.density},
           {"sign_prob", config.sign_prob},
           {"rule", std::string(to_string(config.rule))},
           {"trials", config.trials},
           {"b0_samples", config.b0_samples},
           {"seed", config.seed},
           {"tolerances",
            {{"simulation", config.tol.simulation},
             {"limit", config.tol.limit},
             {"eigen", config.tol.eigen},
             {"fidelity", config.tol.fidelity},
             {"best_response", config.tol.best_response}}}};
  if (config.only_trial) out["only_trial"] = *config.only_trial;
  return out;
}

json report_to_json(const TrialConfig& config, const AgreementReport& report) {
  json props = json::object();
  for (const auto& [name, t] : report.properties) props[name] = {{"pass", t.pass}, {"fail", t.fail}};
  json ce = json::array();
  for (const auto& c : report.counterexamples) {
    ce.push_back({{"property", c.property}, {"trial", c.trial}, {"detail", c.detail}, {"scenario", c.scenario}});
  }
  return {{"schema_version", kSchemaVersion},
          {"config", config_to_json(config)},
          {"trials", report.trials},
          {"ok", report.ok()},
          {"properties", std::move(props)},
          {"verdicts", report.verdicts},
          {"counterexamples", std::move(ce)}};
}

}  // namespace opdyn
