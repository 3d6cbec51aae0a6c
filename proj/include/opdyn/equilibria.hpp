#pragma once

#include <string>
#include <utility>
#include <vector>

#include "opdyn/analysis.hpp"
#include "opdyn/dynamics.hpp"

namespace opdyn {

struct ConsensusCharacterization {
  /// Agents whose out-group weight exceeds the threshold.
  AgentSet strong_out_agents;
  double threshold = 0.0;
  /// Intersection of the fixed-point sets of those agents' deviation
  /// functions; the whole spectrum when no agent qualifies.
  FixedPointSet admissible;
  bool persistent_disagreement = false;
};

/// Which consensus values can be long-run limits. Threshold is 0 for the
/// continuous rule and 1/2 for the discrete rule. Throws Unavailable when
/// some agent uses different deviation functions toward different
/// neighbors.
ConsensusCharacterization consensus_fixed_points(const SignedMultigraph& g, UpdateRule rule);
ConsensusCharacterization consensus_fixed_points(const SignedMultigraph& g);

/// The single deviation spec agent i applies on its W>0 deviate edges,
/// or nullptr when it has none. Throws Unavailable when it uses several.
const DeviationSpec* agent_deviation(const SignedMultigraph& g, int i);

/// step(b) == b: exact for the discrete rule, within `tol` otherwise.
bool is_fixed_point(const SignedMultigraph& g, const OpinionVector& b, UpdateRule rule, double tol = 1e-10,
                    TieRule tie = TieRule::KeepCurrentElseLowest);
bool is_fixed_point(const SignedMultigraph& g, const OpinionVector& b);

/// x on side 1, y on side 2 of an opposition certificate covering every
/// agent. Throws InputError unless (x, y) are opposing viewpoints of the
/// graph's deviation function and the result is a fixed point.
OpinionVector build_polarization(const SignedMultigraph& g, const BipartitionCertificate& cert, Opinion x, Opinion y);

/// targets[k] on group k of an opposition k-partition. Throws InputError
/// when the partition is not an opposition partition or some deviate edge
/// from group k toward group m does not map targets[m] to targets[k].
OpinionVector build_multipolarization(const SignedMultigraph& g, const std::vector<AgentSet>& partition,
                                      const std::vector<Opinion>& targets);

/// (p, p̄) with p = x on side 1 / y on side 2 of a reverse certificate and
/// step(p) = p̄, step(p̄) = p.
std::pair<OpinionVector, OpinionVector> build_oscillation_pair(const SignedMultigraph& g,
                                                              const BipartitionCertificate& cert, Opinion x,
                                                              Opinion y);

/// Largest state space brute_force_fixed_points will enumerate.
inline constexpr double kBruteForceLimit = 1e6;

/// Every fixed point of the discrete rule, in lexicographic label order.
/// Throws WrongRule on interval spectra and BoundExceeded when |S|^n is
/// above kBruteForceLimit.
std::vector<OpinionVector> brute_force_fixed_points(const SignedMultigraph& g,
                                                    TieRule tie = TieRule::KeepCurrentElseLowest);

enum class WisdomVerdict {
  NeverWise,          ///< mu is not an admissible consensus value
  WiseForAllB0,       ///< symmetric soft opposition, mu = 0, neither bipartite kind
  ConditionallyWise,  ///< mu admissible, attainment depends on b(0)
};

std::string_view to_string(WisdomVerdict verdict);

WisdomVerdict wisdom_verdict(const SignedMultigraph& g, Opinion mu, UpdateRule rule);

}  // namespace opdyn
