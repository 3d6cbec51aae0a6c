#pragma once

#include <string>
#include <variant>
#include <vector>

#include "opdyn/graph.hpp"

namespace opdyn {

enum class UpdateRule {
  Continuous,  ///< weighted average of (possibly inverted) opinions
  Discrete,    ///< weighted majority of (possibly inverted) labels
};

enum class TieRule {
  KeepCurrentElseLowest,  ///< keep b_i if it is a maximizer, else the lowest label
  LowestIndex,
};

std::string_view to_string(UpdateRule rule);
/// The rule matching the graph's spectrum.
UpdateRule natural_rule(const SignedMultigraph& g);

/// Weighted label scores closer than this count as ties.
inline constexpr double kScoreTieTolerance = 1e-12;

OpinionVector step_continuous(const SignedMultigraph& g, const OpinionVector& b);
OpinionVector step_discrete(const SignedMultigraph& g, const OpinionVector& b,
                            TieRule tie = TieRule::KeepCurrentElseLowest);
OpinionVector step(const SignedMultigraph& g, const OpinionVector& b, UpdateRule rule,
                   TieRule tie = TieRule::KeepCurrentElseLowest);

struct Trajectory {
  UpdateRule rule = UpdateRule::Continuous;
  std::vector<OpinionVector> steps;  ///< steps[t] = b(t), t = 0..T
};

struct Converged {
  OpinionVector limit;
  int t_star = 0;  ///< first step of the confirmation window
};

struct Oscillating {
  int period = 0;
  std::vector<OpinionVector> orbit;  ///< one full period, in time order
};

struct Undetermined {
  int t_max = 0;
};

struct LimitReport {
  std::variant<Converged, Oscillating, Undetermined> status;
  double tol = 0.0;
  int confirm_window = 0;
  int cycle_buffer = 0;

  bool converged() const { return std::holds_alternative<Converged>(status); }
  bool oscillating() const { return std::holds_alternative<Oscillating>(status); }
  bool undetermined() const { return std::holds_alternative<Undetermined>(status); }
  std::string_view status_name() const;
};

struct SimulationOptions {
  UpdateRule rule = UpdateRule::Continuous;
  int t_max = 10'000;
  double tol = 1e-9;
  TieRule tie = TieRule::KeepCurrentElseLowest;
  /// Consecutive sub-tolerance steps required to declare convergence.
  int confirm_window = 10;
  /// Longest period searched for, and the lag over which a cycle must
  /// persist before it is reported.
  int cycle_buffer = 64;
};

struct Simulation {
  Trajectory trajectory;
  LimitReport report;
};

/// Iterates b(t+1) = (W⊙F)(b(t)) until convergence, a detected cycle, or
/// t_max steps. Deterministic in its inputs.
Simulation simulate(const SignedMultigraph& g, const OpinionVector& b0, const SimulationOptions& options = {});

/// u_i(b) = -Σ_j W_ij (b_i - F_ij(b_j))².
double utility_continuous(const SignedMultigraph& g, const OpinionVector& b, int i);
/// u_i(b) = -Σ_j W_ij (1 - 1[F_ij(b_j) = b_i]).
double utility_discrete(const SignedMultigraph& g, const OpinionVector& b, int i);

/// Sup-norm distance.
double max_abs_diff(const OpinionVector& a, const OpinionVector& b);

}  // namespace opdyn
