#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "opdyn/dynamics.hpp"
#include "opdyn/graph.hpp"
#include "opdyn/scenario.hpp"

namespace opdyn {

using Rng = std::mt19937_64;

/// Deterministic 64-bit mixer used to derive per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Sign patterns for random symmetric soft-opposition graphs.
enum class SignRegime {
  Uniform,     ///< each edge deviates with probability sign_prob
  Opposition,  ///< random sides; deviate exactly across sides
  Reverse,     ///< random sides; deviate exactly within sides
  Imbalanced,  ///< uniform signs, re-drawn until neither bipartition exists
};

std::string_view to_string(SignRegime regime);

/// Connected symmetric zero-diagonal graph on [-1, 1] with one soft spec
/// "D". Weights start uniform in [0.1, 1] and are scaled to a symmetric
/// doubly stochastic matrix; supports that admit no such scaling are
/// redrawn.
SignedMultigraph random_sslss(int n, double density, double sign_prob, SignRegime regime, Rng& rng);
SignedMultigraph random_sslss(int n, double density, double sign_prob, std::uint64_t seed);

/// Row-stochastic zero-diagonal graph on [-1, 1] with mixed deviation
/// kinds (soft, hard, affine, constant, signed power) per edge.
SignedMultigraph random_continuous_graph(int n, Rng& rng);

/// Small discrete instance: n in {2, 3}, K in {2, 3}, integer weights
/// 0..3 normalized per row, one non-identity spec per agent.
SignedMultigraph random_discrete_graph(bool zero_diagonal, Rng& rng);

OpinionVector random_opinions(const OpinionSpectrum& s, int n, Rng& rng);

/// Maximizer of utility_continuous over agent i's own opinion, from a
/// quadratic through three sample points. Needs W_ii = 0 and -1, 0, 1 in S.
double best_response_continuous(const SignedMultigraph& g, const OpinionVector& b, int i);

/// Labels maximizing utility_discrete for agent i (exhaustive scan).
std::vector<int> best_responses_discrete(const SignedMultigraph& g, const OpinionVector& b, int i);

struct Tolerances {
  double simulation = 1e-11;  ///< convergence tolerance of simulated runs
  double limit = 1e-6;        ///< simulated limit vs prediction
  double eigen = 1e-8;        ///< membership of ±1 and spectrum comparison
  double fidelity = 1e-12;    ///< affine representation vs step
  double best_response = 1e-10;
};

struct TrialConfig {
  int n_min = 2;
  int n_max = 8;
  double density = 0.5;
  double sign_prob = 0.5;
  UpdateRule rule = UpdateRule::Continuous;
  int trials = 500;
  int b0_samples = 5;
  std::uint64_t seed = 1;
  Tolerances tol;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 0;
  /// Run only this trial index (replaying a counterexample).
  std::optional<int> only_trial;
};

struct PropertyTally {
  int pass = 0;
  int fail = 0;
};

struct Counterexample {
  std::string property;
  int trial = 0;
  std::string detail;
  json scenario;  ///< loadable scenario with the failing initial opinions
};

struct AgreementReport {
  int trials = 0;
  std::map<std::string, PropertyTally> properties;
  std::map<std::string, int> verdicts;  ///< how often each regime was seen
  std::vector<Counterexample> counterexamples;

  bool ok() const { return counterexamples.empty(); }
  int failures(const std::string& property) const;
  int passes(const std::string& property) const;
};

/// Runs every property check on `config.trials` seeded random graphs.
/// Identical configs give identical reports regardless of thread count.
AgreementReport run_trials(const TrialConfig& config);

json config_to_json(const TrialConfig& config);
json report_to_json(const TrialConfig& config, const AgreementReport& report);

}  // namespace opdyn
