#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace opdyn {

/// A single opinion. On an interval spectrum this is the real value; on a
/// discrete spectrum it is the 0-based index of the label (an exact
/// integer-valued double).
using Opinion = double;
using OpinionVector = std::vector<Opinion>;

/// Equality tolerance for closed-form continuous checks (involution,
/// opposing viewpoints, fixed-point membership).
inline constexpr double kOpinionTolerance = 1e-12;

/// The set S opinions live in: a closed interval [lo, hi] (possibly the
/// whole real line) or a totally ordered list of labels A_1 < ... < A_K.
class OpinionSpectrum {
 public:
  static OpinionSpectrum interval(double lo, double hi);
  static OpinionSpectrum real_line();
  static OpinionSpectrum discrete(std::vector<std::string> labels);

  bool is_discrete() const { return discrete_; }
  bool is_interval() const { return !discrete_; }
  bool is_bounded() const;
  /// Symmetric interval [-b, b] or the real line.
  bool is_symmetric() const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  /// Midpoint of a bounded interval; 0 on the real line.
  double center() const;

  /// Number of labels (discrete only).
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int index) const;
  /// Index of a label, or -1.
  int index_of(std::string_view label) const;

  bool contains(Opinion x) const;
  /// Human-readable rendering: the label for discrete spectra, the number
  /// otherwise.
  std::string format(Opinion x) const;

  bool operator==(const OpinionSpectrum& other) const = default;

 private:
  OpinionSpectrum() = default;

  bool discrete_ = false;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<std::string> labels_;
};

enum class DeviationKind { Identity, Soft, Hard, Affine, Constant, SignedPower, Table };

std::string_view to_string(DeviationKind kind);

/// Parametric description of a map S -> S used on "deviate" edges.
///
/// Factories reject structurally impossible specs (affine on labels, a
/// table of the wrong length, an affine map that leaves the interval).
/// Specs that are well formed but equal the identity function are
/// constructible; `acts_as_identity()` reports them and the graph
/// validator refuses them on deviate edges.
class DeviationSpec {
 public:
  static DeviationSpec identity(OpinionSpectrum spectrum);
  static DeviationSpec soft(OpinionSpectrum spectrum);
  static DeviationSpec hard(OpinionSpectrum spectrum, bool midpoint_to_upper = true);
  static DeviationSpec affine(OpinionSpectrum spectrum, double a, double b);
  static DeviationSpec constant(OpinionSpectrum spectrum, Opinion target);
  static DeviationSpec signed_power(OpinionSpectrum spectrum, double p);
  /// `map[k]` is the image of label k.
  static DeviationSpec table(OpinionSpectrum spectrum, std::vector<int> map);

  DeviationKind kind() const { return kind_; }
  const OpinionSpectrum& spectrum() const { return spectrum_; }
  double a() const { return a_; }
  double b() const { return b_; }
  Opinion target() const { return target_; }
  double p() const { return p_; }
  bool midpoint_to_upper() const { return midpoint_to_upper_; }
  const std::vector<int>& map() const { return map_; }

  /// True when the deviation maps every opinion to itself.
  bool acts_as_identity() const;

  /// Evaluates the map without the deviate-role identity check.
  /// Throws DomainError for inputs outside the spectrum.
  Opinion apply(Opinion x) const;

  /// Affine-linear coefficients (slope, intercept) when the deviation has them.
  bool affine_form(double& slope, double& intercept) const;

  bool operator==(const DeviationSpec& other) const = default;

 private:
  DeviationSpec(DeviationKind kind, OpinionSpectrum spectrum) : kind_(kind), spectrum_(std::move(spectrum)) {}

  DeviationKind kind_;
  OpinionSpectrum spectrum_;
  double a_ = 0.0;
  double b_ = 0.0;
  Opinion target_ = 0.0;
  double p_ = 1.0;
  bool midpoint_to_upper_ = true;
  std::vector<int> map_;
};

/// Exact fixed-point set of a deviation function: empty, a finite list of
/// opinions, or a closed interval.
class FixedPointSet {
 public:
  enum class Shape { Empty, Finite, Interval };

  static FixedPointSet empty();
  static FixedPointSet points(std::vector<Opinion> values);
  static FixedPointSet interval(double lo, double hi);
  /// Every opinion of the spectrum.
  static FixedPointSet whole(const OpinionSpectrum& spectrum);

  Shape shape() const { return shape_; }
  bool is_empty() const { return shape_ == Shape::Empty; }
  const std::vector<Opinion>& values() const { return values_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  bool contains(Opinion x, double tol = kOpinionTolerance) const;
  FixedPointSet intersect(const FixedPointSet& other, double tol = kOpinionTolerance) const;

 private:
  Shape shape_ = Shape::Empty;
  std::vector<Opinion> values_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// 𝔇(x) for a spec used in a deviate role. Throws InvalidDeviation for
/// identity-like specs and DomainError for out-of-spectrum inputs.
Opinion eval_deviation(const DeviationSpec& spec, Opinion x);

FixedPointSet fixed_points(const DeviationSpec& spec);

/// 𝔇(x) = y and 𝔇(y) = x (exact on labels, within 1e-12 on intervals).
bool are_opposing_viewpoints(const DeviationSpec& spec, Opinion x, Opinion y);

}  // namespace opdyn
