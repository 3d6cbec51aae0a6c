#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "opdyn/analysis.hpp"
#include "opdyn/graph.hpp"

namespace opdyn {

/// (W⊙F)(x) = A x + d for graphs whose deviations are all affine.
struct AffineRep {
  Eigen::MatrixXd A;
  Eigen::VectorXd d;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return A * x + d; }
};

/// Throws RepresentationUnavailable for discrete spectra or non-affine
/// deviation specs on W>0 edges.
AffineRep affine_representation(const SignedMultigraph& g);

struct SymmetricEigen {
  Eigen::VectorXd values;   ///< ascending
  Eigen::MatrixXd vectors;  ///< column k belongs to values(k)
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops
/// below 1e-12. Throws InputError unless A is symmetric within 1e-12.
SymmetricEigen eigen_symmetric(const Eigen::MatrixXd& A);

bool is_symmetric(const Eigen::MatrixXd& A, double tol = 1e-12);

/// True when some eigenvalue lies within `tol` of `lambda`.
bool has_eigenvalue(const SymmetricEigen& eig, double lambda, double tol = 1e-8);

struct SpectralRadius {
  double value = 0.0;
  /// Set when the value comes from power iteration rather than a full
  /// symmetric eigendecomposition.
  bool estimate = false;
  int iterations = 0;
};

/// Exact (Jacobi) for symmetric A; otherwise a power-iteration estimate
/// that also resolves a dominant complex-conjugate or ± pair.
SpectralRadius spectral_radius(const Eigen::MatrixXd& A);

/// Max absolute row sum.
double infinity_norm(const Eigen::MatrixXd& A);

struct GaugeMatrix {
  std::vector<int> signs;  ///< diagonal of Δ, each ±1

  Eigen::MatrixXd delta() const;
};

/// Δ with ΔAΔ = |A|, built from the opposition bipartition; absent when
/// the graph has no such bipartition or Δ fails the entrywise check.
std::optional<GaugeMatrix> gauge_matrix(const SignedMultigraph& g);

struct InfluenceReport {
  std::vector<double> s;    ///< left unit eigenvector of |A|, sums to 1
  std::vector<int> g_signs;  ///< +1 on side 1, -1 on side 2
  BipartitionCertificate certificate;
  int iterations = 0;

  /// a = Σ_j g_j s_j b0_j.
  double long_run_value(const OpinionVector& b0) const;
  /// Limit opinion g_i · a for every agent.
  OpinionVector predicted_limit(const OpinionVector& b0) const;
};

/// Requires a strongly connected, aperiodic, opposition-bipartite graph
/// of the symmetric soft-opposition class. Throws RegimeError naming the
/// failed condition.
InfluenceReport influence_report(const SignedMultigraph& g);

}  // namespace opdyn
