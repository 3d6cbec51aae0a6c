#include "opdyn/spectrum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "opdyn/error.hpp"

namespace opdyn {

namespace {

bool is_label_index(Opinion x, int k) {
  return std::isfinite(x) && x == std::floor(x) && x >= 0.0 && x < static_cast<double>(k);
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

// ---------------------------------------------------------------------------
// OpinionSpectrum

OpinionSpectrum OpinionSpectrum::interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw InputError("interval spectrum needs finite bounds lo < hi");
  }
  OpinionSpectrum s;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

OpinionSpectrum OpinionSpectrum::real_line() {
  OpinionSpectrum s;
  s.lo_ = -std::numeric_limits<double>::infinity();
  s.hi_ = std::numeric_limits<double>::infinity();
  return s;
}

OpinionSpectrum OpinionSpectrum::discrete(std::vector<std::string> labels) {
  if (labels.size() < 2) throw InputError("discrete spectrum needs at least two labels");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw InputError("discrete spectrum labels must be distinct");
  OpinionSpectrum s;
  s.discrete_ = true;
  s.lo_ = 0.0;
  s.hi_ = static_cast<double>(labels.size() - 1);
  s.labels_ = std::move(labels);
  return s;
}

bool OpinionSpectrum::is_bounded() const { return discrete_ || (std::isfinite(lo_) && std::isfinite(hi_)); }

bool OpinionSpectrum::is_symmetric() const {
  if (discrete_) return false;
  if (!is_bounded()) return true;
  return lo_ == -hi_;
}

double OpinionSpectrum::center() const { return is_bounded() ? 0.5 * (lo_ + hi_) : 0.0; }

const std::string& OpinionSpectrum::label(int index) const {
  if (!discrete_ || index < 0 || index >= size()) throw DomainError("label index out of range");
  return labels_[static_cast<std::size_t>(index)];
}

int OpinionSpectrum::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

bool OpinionSpectrum::contains(Opinion x) const {
  if (discrete_) return is_label_index(x, size());
  if (std::isnan(x)) return false;
  return x >= lo_ && x <= hi_;
}

std::string OpinionSpectrum::format(Opinion x) const {
  if (discrete_) return label(static_cast<int>(x));
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// DeviationSpec

std::string_view to_string(DeviationKind kind) {
  switch (kind) {
    case DeviationKind::Identity: return "identity";
    case DeviationKind::Soft: return "soft";
    case DeviationKind::Hard: return "hard";
    case DeviationKind::Affine: return "affine";
    case DeviationKind::Constant: return "constant";
    case DeviationKind::SignedPower: return "signed_power";
    case DeviationKind::Table: return "table";
  }
  return "unknown";
}

DeviationSpec DeviationSpec::identity(OpinionSpectrum spectrum) {
  return DeviationSpec(DeviationKind::Identity, std::move(spectrum));
}

DeviationSpec DeviationSpec::soft(OpinionSpectrum spectrum) {
  return DeviationSpec(DeviationKind::Soft, std::move(spectrum));
}

DeviationSpec DeviationSpec::hard(OpinionSpectrum spectrum, bool midpoint_to_upper) {
  if (!spectrum.is_bounded()) throw InputError("hard opposition needs a bounded spectrum");
  DeviationSpec spec(DeviationKind::Hard, std::move(spectrum));
  spec.midpoint_to_upper_ = midpoint_to_upper;
  return spec;
}

DeviationSpec DeviationSpec::affine(OpinionSpectrum spectrum, double a, double b) {
  if (spectrum.is_discrete()) throw InputError("affine deviation needs an interval spectrum");
  if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("affine coefficients must be finite");
  if (spectrum.is_bounded()) {
    if (std::abs(a) > 1.0) throw InputError("affine deviation on a bounded interval needs |a| <= 1");
    const double lo = spectrum.lo();
    const double hi = spectrum.hi();
    const double y1 = a * lo + b;
    const double y2 = a * hi + b;
    const double tol = kOpinionTolerance * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    if (std::min(y1, y2) < lo - tol || std::max(y1, y2) > hi + tol) {
      throw InputError("affine deviation maps the interval outside itself");
    }
  }
  DeviationSpec spec(DeviationKind::Affine, std::move(spectrum));
  spec.a_ = a;
  spec.b_ = b;
  return spec;
}

DeviationSpec DeviationSpec::constant(OpinionSpectrum spectrum, Opinion target) {
  if (!spectrum.contains(target)) throw InputError("constant deviation target outside the spectrum");
  DeviationSpec spec(DeviationKind::Constant, std::move(spectrum));
  spec.target_ = target;
  return spec;
}

DeviationSpec DeviationSpec::signed_power(OpinionSpectrum spectrum, double p) {
  if (spectrum.is_discrete() || !spectrum.is_bounded() || !spectrum.is_symmetric()) {
    throw InputError("signed power deviation needs a bounded symmetric interval");
  }
  if (!(p > 0.0) || !std::isfinite(p)) throw InputError("signed power exponent must be positive");
  DeviationSpec spec(DeviationKind::SignedPower, std::move(spectrum));
  spec.p_ = p;
  return spec;
}

DeviationSpec DeviationSpec::table(OpinionSpectrum spectrum, std::vector<int> map) {
  if (!spectrum.is_discrete()) throw InputError("table deviation needs a discrete spectrum");
  if (static_cast<int>(map.size()) != spectrum.size()) throw InputError("table deviation must map every label");
  for (int v : map) {
    if (v < 0 || v >= spectrum.size()) throw InputError("table deviation maps to an unknown label");
  }
  DeviationSpec spec(DeviationKind::Table, std::move(spectrum));
  spec.map_ = std::move(map);
  return spec;
}

bool DeviationSpec::acts_as_identity() const {
  switch (kind_) {
    case DeviationKind::Identity: return true;
    case DeviationKind::Affine: return a_ == 1.0 && b_ == 0.0;
    case DeviationKind::SignedPower: return p_ == 1.0;
    case DeviationKind::Table:
      for (std::size_t k = 0; k < map_.size(); ++k) {
        if (map_[k] != static_cast<int>(k)) return false;
      }
      return true;
    default: return false;
  }
}

Opinion DeviationSpec::apply(Opinion x) const {
  if (!spectrum_.contains(x)) throw DomainError("opinion " + std::to_string(x) + " outside the spectrum");
  const bool discrete = spectrum_.is_discrete();
  const int top = discrete ? spectrum_.size() - 1 : 0;
  switch (kind_) {
    case DeviationKind::Identity: return x;
    case DeviationKind::Soft:
      if (discrete) return static_cast<double>(top) - x;
      if (!spectrum_.is_bounded()) return -x;
      return spectrum_.lo() + spectrum_.hi() - x;
    case DeviationKind::Hard: {
      const double mid = 0.5 * (spectrum_.lo() + spectrum_.hi());
      if (x < mid) return spectrum_.hi();
      if (x > mid) return spectrum_.lo();
      return midpoint_to_upper_ ? spectrum_.hi() : spectrum_.lo();
    }
    case DeviationKind::Affine: {
      const double y = a_ * x + b_;
      // rounding can push a boundary image a hair outside the interval
      return std::clamp(y, spectrum_.lo(), spectrum_.hi());
    }
    case DeviationKind::Constant: return target_;
    case DeviationKind::SignedPower: {
      const double beta = spectrum_.hi();
      return sign(x) * beta * std::pow(std::abs(x) / beta, p_);
    }
    case DeviationKind::Table: return static_cast<double>(map_[static_cast<std::size_t>(x)]);
  }
  return x;
}

bool DeviationSpec::affine_form(double& slope, double& intercept) const {
  if (spectrum_.is_discrete()) return false;
  switch (kind_) {
    case DeviationKind::Identity:
      slope = 1.0;
      intercept = 0.0;
      return true;
    case DeviationKind::Soft:
      slope = -1.0;
      intercept = spectrum_.is_bounded() ? spectrum_.lo() + spectrum_.hi() : 0.0;
      return true;
    case DeviationKind::Affine:
      slope = a_;
      intercept = b_;
      return true;
    case DeviationKind::Constant:
      slope = 0.0;
      intercept = target_;
      return true;
    case DeviationKind::SignedPower:
      if (p_ != 1.0) return false;
      slope = 1.0;
      intercept = 0.0;
      return true;
    default: return false;
  }
}

// ---------------------------------------------------------------------------
// FixedPointSet

FixedPointSet FixedPointSet::empty() { return {}; }

FixedPointSet FixedPointSet::points(std::vector<Opinion> values) {
  if (values.empty()) return empty();
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  FixedPointSet s;
  s.shape_ = Shape::Finite;
  s.values_ = std::move(values);
  return s;
}

FixedPointSet FixedPointSet::interval(double lo, double hi) {
  if (lo > hi) return empty();
  if (lo == hi) return points({lo});
  FixedPointSet s;
  s.shape_ = Shape::Interval;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

FixedPointSet FixedPointSet::whole(const OpinionSpectrum& spectrum) {
  if (spectrum.is_interval()) return interval(spectrum.lo(), spectrum.hi());
  std::vector<Opinion> all;
  for (int k = 0; k < spectrum.size(); ++k) all.push_back(k);
  return points(std::move(all));
}

bool FixedPointSet::contains(Opinion x, double tol) const {
  switch (shape_) {
    case Shape::Empty: return false;
    case Shape::Finite:
      return std::any_of(values_.begin(), values_.end(), [&](Opinion v) { return std::abs(v - x) <= tol; });
    case Shape::Interval: return x >= lo_ - tol && x <= hi_ + tol;
  }
  return false;
}

FixedPointSet FixedPointSet::intersect(const FixedPointSet& other, double tol) const {
  if (is_empty() || other.is_empty()) return empty();
  if (shape_ == Shape::Finite || other.shape_ == Shape::Finite) {
    const FixedPointSet& finite = shape_ == Shape::Finite ? *this : other;
    const FixedPointSet& rest = shape_ == Shape::Finite ? other : *this;
    std::vector<Opinion> kept;
    for (Opinion v : finite.values_) {
      if (rest.contains(v, tol)) kept.push_back(v);
    }
    return points(std::move(kept));
  }
  const double lo = std::max(lo_, other.lo_);
  const double hi = std::min(hi_, other.hi_);
  if (lo > hi + tol) return empty();
  if (hi - lo <= tol) return points({lo});
  return interval(lo, hi);
}

// ---------------------------------------------------------------------------
// Operations

Opinion eval_deviation(const DeviationSpec& spec, Opinion x) {
  if (spec.acts_as_identity()) {
    throw InvalidDeviation("identity map used as a deviation function");
  }
  return spec.apply(x);
}

FixedPointSet fixed_points(const DeviationSpec& spec) {
  const OpinionSpectrum& s = spec.spectrum();
  if (spec.acts_as_identity()) return FixedPointSet::whole(s);

  if (s.is_discrete()) {
    std::vector<Opinion> fixed;
    for (int k = 0; k < s.size(); ++k) {
      if (spec.apply(k) == k) fixed.push_back(k);
    }
    return FixedPointSet::points(std::move(fixed));
  }

  switch (spec.kind()) {
    case DeviationKind::Soft: return FixedPointSet::points({s.center()});
    case DeviationKind::Hard: return FixedPointSet::empty();
    case DeviationKind::Affine: {
      if (spec.a() == 1.0) return FixedPointSet::empty();  // pure shift
      const double x = spec.b() / (1.0 - spec.a());
      return s.contains(x) ? FixedPointSet::points({x}) : FixedPointSet::empty();
    }
    case DeviationKind::Constant: return FixedPointSet::points({spec.target()});
    case DeviationKind::SignedPower: return FixedPointSet::points({-s.hi(), 0.0, s.hi()});
    default: return FixedPointSet::empty();
  }
}

bool are_opposing_viewpoints(const DeviationSpec& spec, Opinion x, Opinion y) {
  const OpinionSpectrum& s = spec.spectrum();
  if (!s.contains(x) || !s.contains(y)) return false;
  const Opinion fx = spec.apply(x);
  const Opinion fy = spec.apply(y);
  if (s.is_discrete()) return fx == y && fy == x;
  return std::abs(fx - y) <= kOpinionTolerance && std::abs(fy - x) <= kOpinionTolerance;
}

}  // namespace opdyn
