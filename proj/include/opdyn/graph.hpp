#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opdyn/spectrum.hpp"

namespace opdyn {

/// Sorted list of 0-based agent indices.
using AgentSet = std::vector<int>;

/// An edge "exists" iff its weight exceeds this threshold.
inline constexpr double kEdgeThreshold = 1e-12;
/// Row sums of W must equal one within this tolerance.
inline constexpr double kRowSumTolerance = 1e-12;

/// F_ij: follow (empty id) or deviate with the named spec.
class Relation {
 public:
  static Relation follow() { return Relation{}; }
  static Relation deviate(std::string spec_id) { return Relation{std::move(spec_id)}; }

  bool follows() const { return spec_id_.empty(); }
  bool deviates() const { return !spec_id_.empty(); }
  const std::string& spec_id() const { return spec_id_; }

  bool operator==(const Relation&) const = default;

 private:
  Relation() = default;
  explicit Relation(std::string id) : spec_id_(std::move(id)) {}
  std::string spec_id_;
};

using RelationMatrix = std::vector<std::vector<Relation>>;

/// The operator W ⊙ F: row-stochastic intensities plus a follow/deviate
/// relation per ordered pair. Immutable once built.
///
/// Construction only checks shapes. Semantic invariants (row sums,
/// dangling spec ids, identity deviations) are reported by `validate`.
class SignedMultigraph {
 public:
  SignedMultigraph(OpinionSpectrum spectrum, Eigen::MatrixXd weights, RelationMatrix relations,
                   std::map<std::string, DeviationSpec> deviations);

  int size() const { return static_cast<int>(weights_.rows()); }
  const OpinionSpectrum& spectrum() const { return spectrum_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double weight(int i, int j) const { return weights_(i, j); }
  bool has_edge(int i, int j) const { return weights_(i, j) > kEdgeThreshold; }

  const Relation& relation(int i, int j) const { return relations_[idx(i)][idx(j)]; }
  const RelationMatrix& relations() const { return relations_; }
  bool deviates(int i, int j) const { return relation(i, j).deviates(); }
  const std::map<std::string, DeviationSpec>& deviations() const { return deviations_; }

  /// Spec on edge (i, j); nullptr for follow edges and dangling ids.
  const DeviationSpec* deviation(int i, int j) const;

  /// F_ij(x): x on follow edges, 𝔇_ij(x) on deviate edges.
  Opinion signal(int i, int j, Opinion x) const;

  /// Subgraph on `agents` (in the given order). With `renormalize`, each
  /// row is rescaled to sum to one; rows with no mass left are rejected.
  SignedMultigraph induced(const AgentSet& agents, bool renormalize = true) const;

  /// F̄: follow becomes deviate (with `spec_id`) and deviate becomes follow.
  /// Without an id, the single spec used by the graph is reused, or a soft
  /// opposition spec is added when the graph has none.
  SignedMultigraph flipped(std::optional<std::string> spec_id = std::nullopt) const;

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

  OpinionSpectrum spectrum_;
  Eigen::MatrixXd weights_;
  RelationMatrix relations_;
  std::map<std::string, DeviationSpec> deviations_;
};

struct Violation {
  enum class Kind {
    TooFewAgents,
    NonFiniteWeight,
    NegativeWeight,
    RowSum,
    DanglingSpec,
    SpectrumMismatch,
    InvalidDeviation,
  };
  Kind kind;
  int row = -1;
  int col = -1;
  std::string message;
};

std::string_view to_string(Violation::Kind kind);

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind kind) const;
  std::string summary() const;
};

/// Every violated structural invariant; empty iff the graph is valid.
ValidationReport validate(const SignedMultigraph& g, double row_sum_tol = kRowSumTolerance);

/// In(i): agents i follows. Out(i): agents i deviates from. Membership
/// follows the relation matrix, including zero-weight pairs.
AgentSet in_group(const SignedMultigraph& g, int i);
AgentSet out_group(const SignedMultigraph& g, int i);

/// W_{i,A} = Σ_{j∈A} W_ij.
double weight_mass(const SignedMultigraph& g, int i, const AgentSet& agents);
/// W_{i,Out(i)}.
double out_weight(const SignedMultigraph& g, int i);

/// Membership of the simple/linear/soft-opposition class, with reasons
/// for any failure.
struct SslsCheck {
  bool ok = false;
  std::vector<std::string> reasons;
  explicit operator bool() const { return ok; }
};

SslsCheck is_sslss(const SignedMultigraph& g);

/// Every agent, 0..n-1.
AgentSet all_agents(int n);

}  // namespace opdyn
