#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opdyn/graph.hpp"

namespace opdyn {

/// Maximal strongly connected components of the directed W>0 graph, in
/// reverse topological order of the condensation (sinks first). Each
/// component is sorted.
std::vector<AgentSet> strongly_connected_components(const SignedMultigraph& g);

/// Closed strongly connected groups plus the rest of the world.
struct StructurePartition {
  std::vector<AgentSet> groups;  ///< ordered by smallest member
  AgentSet rest;
};

StructurePartition structure_partition(const SignedMultigraph& g);

enum class BipartitionKind { Opposition, ReverseOpposition };

std::string_view to_string(BipartitionKind kind);

/// A two-sided split of a subset of agents. `side[i]` is 1 or 2 for
/// members of the subset and 0 for everyone else. Side 2 may be empty.
struct BipartitionCertificate {
  BipartitionKind kind = BipartitionKind::Opposition;
  std::vector<int> side;

  AgentSet side1() const;
  AgentSet side2() const;
  /// +1 on side 1, -1 on side 2, 0 outside the subset.
  std::vector<int> signs() const;
};

/// Follow edges within sides, deviate edges across (W>0 edges of the
/// subset only). Found by parity propagation over the undirected edge set
/// followed by an edgewise re-check.
std::optional<BipartitionCertificate> opposition_bipartition(const SignedMultigraph& g, const AgentSet& subset);
std::optional<BipartitionCertificate> opposition_bipartition(const SignedMultigraph& g);

/// Deviate edges within sides, follow edges across. Computed on the
/// relation-flipped graph.
std::optional<BipartitionCertificate> reverse_opposition_bipartition(const SignedMultigraph& g,
                                                                     const AgentSet& subset);
std::optional<BipartitionCertificate> reverse_opposition_bipartition(const SignedMultigraph& g);

/// Edge-by-edge check of a certificate against its kind.
bool certificate_holds(const SignedMultigraph& g, const BipartitionCertificate& cert);

/// True iff within-group W>0 edges all follow and cross-group W>0 edges
/// all deviate. Throws InputError unless the groups cover every agent
/// exactly once.
bool verify_k_partition(const SignedMultigraph& g, const std::vector<AgentSet>& partition);

/// gcd of directed cycle lengths of a strongly connected subset (0 for a
/// lone agent without a self-loop). Throws InputError when the subset is
/// not strongly connected.
int period(const SignedMultigraph& g, const AgentSet& subset);
inline bool is_aperiodic(const SignedMultigraph& g, const AgentSet& subset) { return period(g, subset) == 1; }

bool is_strongly_connected(const SignedMultigraph& g, const AgentSet& subset);

enum class Verdict { Polarizes, Diverges, NeutralConsensus };

std::string_view to_string(Verdict verdict);

struct GroupClassification {
  AgentSet members;
  /// Absent when the group lies outside the symmetric soft-opposition
  /// class the trichotomy covers.
  std::optional<Verdict> verdict;
  std::optional<BipartitionCertificate> opposition;
  std::optional<BipartitionCertificate> reverse;
  int period = 0;
  bool out_of_theory = false;
  std::vector<std::string> notes;
};

struct ClassificationResult {
  std::vector<GroupClassification> groups;
  AgentSet rest;
  /// Whether opinions converge for every initial vector; absent when a
  /// group is out of theory or the graph uses non-soft deviations.
  std::optional<bool> overall_converges;
};

ClassificationResult classify(const SignedMultigraph& g);

}  // namespace opdyn
