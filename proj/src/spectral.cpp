#include "opdyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "opdyn/error.hpp"

namespace opdyn {

AffineRep affine_representation(const SignedMultigraph& g) {
  if (g.spectrum().is_discrete()) throw RepresentationUnavailable("discrete spectra have no affine representation");
  const int n = g.size();
  AffineRep rep{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = g.weight(i, j);
      if (w == 0.0) continue;
      if (g.relation(i, j).follows()) {
        rep.A(i, j) = w;
        continue;
      }
      const DeviationSpec* spec = g.deviation(i, j);
      double slope = 0.0;
      double intercept = 0.0;
      if (spec == nullptr || !spec->affine_form(slope, intercept)) {
        throw RepresentationUnavailable("deviation spec '" + g.relation(i, j).spec_id() + "' is not affine");
      }
      rep.A(i, j) = slope * w;
      rep.d(i) += intercept * w;
    }
  }
  return rep;
}

bool is_symmetric(const Eigen::MatrixXd& A, double tol) {
  if (A.rows() != A.cols()) return false;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < A.cols(); ++j) {
      if (std::abs(A(i, j) - A(j, i)) > tol) return false;
    }
  }
  return true;
}

SymmetricEigen eigen_symmetric(const Eigen::MatrixXd& input) {
  if (!is_symmetric(input)) throw InputError("eigen_symmetric needs a symmetric matrix");
  const Eigen::Index n = input.rows();
  Eigen::MatrixXd a = (input + input.transpose()) / 2.0;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  auto off_norm = [&] {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j) sum += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(sum);
  };

  int sweeps = 0;
  constexpr int kMaxSweeps = 100;
  while (off_norm() >= 1e-12 && sweeps < kMaxSweeps) {
    ++sweeps;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  out.sweeps = sweeps;
  return out;
}

bool has_eigenvalue(const SymmetricEigen& eig, double lambda, double tol) {
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (std::abs(eig.values(k) - lambda) <= tol) return true;
  }
  return false;
}

double infinity_norm(const Eigen::MatrixXd& A) {
  if (A.size() == 0) return 0.0;
  return A.cwiseAbs().rowwise().sum().maxCoeff();
}

namespace {

// Dominant modulus from one power-iteration step: fits A²v ≈ c1·Av + c0·v,
// whose roots are the dominant eigenvalue pair once v has settled into
// its invariant subspace. Falls back to |Av| when Av is parallel to v.
double pair_modulus(const Eigen::VectorXd& v, const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  const double uu = u.dot(u);
  const double vv = v.dot(v);
  const double uv = u.dot(v);
  const double det = uu * vv - uv * uv;
  if (det <= 1e-10 * uu * vv) return std::sqrt(uu);
  const double wu = w.dot(u);
  const double wv = w.dot(v);
  const double c1 = (vv * wu - uv * wv) / det;
  const double c0 = (uu * wv - uv * wu) / det;
  const double residual = (w - c1 * u - c0 * v).norm();
  if (residual > 1e-6 * std::max(w.norm(), 1e-300)) return std::sqrt(uu);
  const double disc = c1 * c1 + 4.0 * c0;
  if (disc < 0.0) return std::sqrt(-c0);
  const double r = std::sqrt(disc);
  return std::max(std::abs(c1 + r), std::abs(c1 - r)) / 2.0;
}

}  // namespace

SpectralRadius spectral_radius(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw InputError("spectral_radius needs a square matrix");
  SpectralRadius out;
  if (A.rows() == 0) return out;
  if (is_symmetric(A)) {
    const SymmetricEigen eig = eigen_symmetric(A);
    out.value = eig.values.cwiseAbs().maxCoeff();
    out.iterations = eig.sweeps;
    return out;
  }

  out.estimate = true;
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(A.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = dist(rng);
  v.normalize();

  double prev = -1.0;
  constexpr int kMaxIterations = 10'000;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const Eigen::VectorXd u = A * v;
    const double nu = u.norm();
    out.iterations = it;
    if (nu < 1e-300) {
      out.value = 0.0;
      return out;
    }
    const Eigen::VectorXd w = A * u;
    const double est = pair_modulus(v, u, w);
    out.value = est;
    if (std::abs(est - prev) < 1e-12) return out;
    prev = est;
    v = u / nu;
  }
  return out;
}

Eigen::MatrixXd GaugeMatrix::delta() const {
  Eigen::VectorXd diag(static_cast<Eigen::Index>(signs.size()));
  for (std::size_t i = 0; i < signs.size(); ++i) diag(static_cast<Eigen::Index>(i)) = signs[i];
  return diag.asDiagonal();
}

std::optional<GaugeMatrix> gauge_matrix(const SignedMultigraph& g) {
  const AffineRep rep = affine_representation(g);
  const auto cert = opposition_bipartition(g);
  if (!cert) return std::nullopt;
  GaugeMatrix gauge{cert->signs()};
  const int n = g.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double flipped = gauge.signs[static_cast<std::size_t>(i)] * gauge.signs[static_cast<std::size_t>(j)] * rep.A(i, j);
      if (std::abs(flipped - std::abs(rep.A(i, j))) > 1e-12) return std::nullopt;
    }
  }
  return gauge;
}

double InfluenceReport::long_run_value(const OpinionVector& b0) const {
  if (b0.size() != s.size()) throw InputError("initial opinion vector has the wrong length");
  double a = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) a += g_signs[j] * s[j] * b0[j];
  return a;
}

OpinionVector InfluenceReport::predicted_limit(const OpinionVector& b0) const {
  const double a = long_run_value(b0);
  OpinionVector out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = g_signs[i] * a;
  return out;
}

InfluenceReport influence_report(const SignedMultigraph& g) {
  const SslsCheck ssls = is_sslss(g);
  if (!ssls) {
    std::string why = "graph is outside the symmetric soft-opposition class";
    for (const auto& r : ssls.reasons) why += "; " + r;
    throw RegimeError(why);
  }
  const AgentSet everyone = all_agents(g.size());
  if (!is_strongly_connected(g, everyone)) throw RegimeError("graph is not strongly connected");
  const int p = period(g, everyone);
  if (p != 1) throw RegimeError("graph is periodic (period " + std::to_string(p) + ")");
  if (reverse_opposition_bipartition(g)) {
    throw RegimeError("influence undefined: graph is reverse opposition bipartite and opinions diverge");
  }
  const auto cert = opposition_bipartition(g);
  if (!cert) {
    throw RegimeError("all powers zero: graph is neither opposition nor reverse opposition bipartite");
  }

  const Eigen::MatrixXd abs_t = affine_representation(g).A.cwiseAbs().transpose();
  const Eigen::Index n = abs_t.rows();
  std::mt19937_64 rng(0x1f1eULL);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = dist(rng);
  x /= x.sum();

  InfluenceReport report;
  constexpr int kMaxIterations = 10'000;
  for (int it = 1; it <= kMaxIterations; ++it) {
    Eigen::VectorXd next = abs_t * x;
    next /= next.sum();
    const double change = (next - x).cwiseAbs().maxCoeff();
    x = next;
    report.iterations = it;
    if (change < 1e-14) break;
  }
  report.s.assign(x.data(), x.data() + n);
  report.g_signs = cert->signs();
  report.certificate = *cert;
  return report;
}

}  // namespace opdyn
