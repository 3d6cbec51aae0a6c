#include <gtest/gtest.h>

#include <random>

#include "opdyn/error.hpp"
#include "opdyn/spectrum.hpp"

namespace opdyn {
namespace {

const OpinionSpectrum kUnit = OpinionSpectrum::interval(-1, 1);
const OpinionSpectrum kFeelings = OpinionSpectrum::discrete({"H", "D", "N", "LI", "LO"});

TEST(Spectrum, RejectsDegenerateSpectra) {
  EXPECT_THROW(OpinionSpectrum::interval(1, 1), InputError);
  EXPECT_THROW(OpinionSpectrum::discrete({"a"}), InputError);
  EXPECT_THROW(OpinionSpectrum::discrete({"a", "a"}), InputError);
}

TEST(Spectrum, Symmetry) {
  EXPECT_TRUE(kUnit.is_symmetric());
  EXPECT_TRUE(OpinionSpectrum::real_line().is_symmetric());
  EXPECT_FALSE(OpinionSpectrum::interval(0, 1).is_symmetric());
  EXPECT_DOUBLE_EQ(OpinionSpectrum::interval(0, 1).center(), 0.5);
}

TEST(Spectrum, LabelsFormatAndLookup) {
  EXPECT_EQ(kFeelings.index_of("LI"), 3);
  EXPECT_EQ(kFeelings.index_of("nope"), -1);
  EXPECT_EQ(kFeelings.format(0), "H");
  EXPECT_TRUE(kFeelings.contains(4));
  EXPECT_FALSE(kFeelings.contains(5));
  EXPECT_FALSE(kFeelings.contains(1.5));
}

TEST(Deviation, SoftOnIntervalReflects) { EXPECT_DOUBLE_EQ(eval_deviation(DeviationSpec::soft(kUnit), -0.5), 0.5); }

TEST(Deviation, SoftOnAsymmetricInterval) {
  const auto s = OpinionSpectrum::interval(0, 10);
  EXPECT_DOUBLE_EQ(eval_deviation(DeviationSpec::soft(s), 2), 8);
}

TEST(Deviation, HardMidpointGoesUpByDefault) {
  EXPECT_DOUBLE_EQ(eval_deviation(DeviationSpec::hard(kUnit), 0.0), 1.0);
  EXPECT_DOUBLE_EQ(eval_deviation(DeviationSpec::hard(kUnit, false), 0.0), -1.0);
  EXPECT_DOUBLE_EQ(eval_deviation(DeviationSpec::hard(kUnit), 0.2), -1.0);
  EXPECT_DOUBLE_EQ(eval_deviation(DeviationSpec::hard(kUnit), -0.2), 1.0);
}

TEST(Deviation, SoftOnLabelsMirrorsOrder) {
  const auto soft = DeviationSpec::soft(kFeelings);
  EXPECT_EQ(eval_deviation(soft, kFeelings.index_of("D")), kFeelings.index_of("LI"));
  EXPECT_EQ(eval_deviation(soft, 2), 2);  // neutral maps to itself
}

TEST(Deviation, OutOfSpectrumInputIsDomainError) {
  EXPECT_THROW(eval_deviation(DeviationSpec::soft(kUnit), 1.5), DomainError);
  EXPECT_THROW(eval_deviation(DeviationSpec::soft(kFeelings), 7), DomainError);
}

TEST(Deviation, IdentityIsRejectedInDeviateRole) {
  EXPECT_THROW(eval_deviation(DeviationSpec::identity(kUnit), 0.3), InvalidDeviation);
  EXPECT_THROW(eval_deviation(DeviationSpec::affine(kUnit, 1, 0), 0.3), InvalidDeviation);
  EXPECT_THROW(eval_deviation(DeviationSpec::signed_power(kUnit, 1), 0.3), InvalidDeviation);
  EXPECT_THROW(eval_deviation(DeviationSpec::table(kFeelings, {0, 1, 2, 3, 4}), 1), InvalidDeviation);
}

TEST(Deviation, FactoriesRejectImpossibleSpecs) {
  EXPECT_THROW(DeviationSpec::affine(kFeelings, -1, 0), InputError);
  EXPECT_THROW(DeviationSpec::affine(kUnit, 2, 0), InputError);
  EXPECT_THROW(DeviationSpec::affine(kUnit, 0.5, 0.8), InputError);
  EXPECT_THROW(DeviationSpec::table(kFeelings, {0, 1}), InputError);
  EXPECT_THROW(DeviationSpec::table(kFeelings, {0, 1, 2, 3, 9}), InputError);
  EXPECT_THROW(DeviationSpec::constant(kUnit, 3), InputError);
  EXPECT_THROW(DeviationSpec::signed_power(OpinionSpectrum::interval(0, 1), 0.5), InputError);
  EXPECT_THROW(DeviationSpec::signed_power(kUnit, -1), InputError);
  EXPECT_THROW(DeviationSpec::hard(OpinionSpectrum::real_line()), InputError);
}

TEST(Deviation, SignedPowerSquareRoot) {
  const auto sp = DeviationSpec::signed_power(kUnit, 0.5);
  EXPECT_DOUBLE_EQ(eval_deviation(sp, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(eval_deviation(sp, -0.25), -0.5);
  const auto wide = DeviationSpec::signed_power(OpinionSpectrum::interval(-4, 4), 0.5);
  EXPECT_DOUBLE_EQ(eval_deviation(wide, 1.0), 2.0);
}

TEST(Deviation, TableMap) {
  const auto t = DeviationSpec::table(kFeelings, {4, 4, 2, 0, 0});
  EXPECT_EQ(eval_deviation(t, 1), 4);
  EXPECT_EQ(eval_deviation(t, 3), 0);
}

TEST(FixedPoints, PerKind) {
  auto soft = fixed_points(DeviationSpec::soft(kUnit));
  ASSERT_EQ(soft.shape(), FixedPointSet::Shape::Finite);
  EXPECT_EQ(soft.values(), std::vector<double>{0.0});
  EXPECT_TRUE(fixed_points(DeviationSpec::hard(kUnit)).is_empty());
  auto aff = fixed_points(DeviationSpec::affine(kUnit, 0.5, 0));
  ASSERT_EQ(aff.values().size(), 1u);
  EXPECT_DOUBLE_EQ(aff.values()[0], 0.0);
  EXPECT_EQ(fixed_points(DeviationSpec::constant(kUnit, 1)).values(), std::vector<double>{1.0});
  EXPECT_EQ(fixed_points(DeviationSpec::signed_power(kUnit, 0.5)).values().size(), 3u);
  EXPECT_EQ(fixed_points(DeviationSpec::soft(kFeelings)).values(), std::vector<double>{2.0});
  EXPECT_TRUE(fixed_points(DeviationSpec::soft(OpinionSpectrum::discrete({"a", "b"}))).is_empty());
  EXPECT_EQ(fixed_points(DeviationSpec::identity(kUnit)).shape(), FixedPointSet::Shape::Interval);
}

TEST(FixedPoints, AgreeWithEvaluationOnLabels) {
  const auto t = DeviationSpec::table(kFeelings, {4, 1, 0, 3, 2});
  const auto fix = fixed_points(t);
  for (int k = 0; k < kFeelings.size(); ++k) EXPECT_EQ(fix.contains(k), t.apply(k) == k) << k;
}

TEST(FixedPoints, Intersection) {
  const auto a = FixedPointSet::points({-1, 0, 1});
  const auto b = FixedPointSet::interval(-0.5, 2);
  const auto c = a.intersect(b);
  EXPECT_EQ(c.values(), (std::vector<double>{0, 1}));
  EXPECT_TRUE(FixedPointSet::points({1}).intersect(FixedPointSet::points({-1})).is_empty());
  EXPECT_TRUE(a.intersect(FixedPointSet::empty()).is_empty());
}

TEST(OpposingViewpoints, Examples) {
  EXPECT_TRUE(are_opposing_viewpoints(DeviationSpec::soft(kUnit), 0.3, -0.3));
  EXPECT_FALSE(are_opposing_viewpoints(DeviationSpec::constant(kUnit, 1), 0.2, 1));
  EXPECT_TRUE(are_opposing_viewpoints(DeviationSpec::soft(kFeelings), 0, 4));
  EXPECT_TRUE(are_opposing_viewpoints(DeviationSpec::hard(kUnit), 1, -1));
}

TEST(DeviationProperties, SoftIsAnInvolution) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto soft = DeviationSpec::soft(kUnit);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng);
    EXPECT_NEAR(eval_deviation(soft, eval_deviation(soft, x)), x, 1e-12);
  }
  const auto sd = DeviationSpec::soft(kFeelings);
  for (int k = 0; k < kFeelings.size(); ++k) EXPECT_EQ(eval_deviation(sd, eval_deviation(sd, k)), k);
}

TEST(DeviationProperties, HardMapsToEndpoints) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto hard = DeviationSpec::hard(kUnit);
  for (int k = 0; k < 1000; ++k) {
    const double y = eval_deviation(hard, u(rng));
    EXPECT_TRUE(y == -1.0 || y == 1.0);
  }
}

TEST(DeviationProperties, StaysInsideAndMovesSomething) {
  const std::vector<DeviationSpec> specs = {
      DeviationSpec::soft(kUnit),           DeviationSpec::hard(kUnit),
      DeviationSpec::affine(kUnit, 0.5, 0), DeviationSpec::affine(kUnit, -0.5, 0.25),
      DeviationSpec::constant(kUnit, 1),    DeviationSpec::signed_power(kUnit, 0.5),
      DeviationSpec::signed_power(kUnit, 3)};
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto& spec : specs) {
    bool moved = false;
    for (int k = 0; k < 1000; ++k) {
      const double x = u(rng);
      const double y = eval_deviation(spec, x);
      EXPECT_GE(y, -1.0);
      EXPECT_LE(y, 1.0);
      moved = moved || y != x;
    }
    EXPECT_TRUE(moved) << to_string(spec.kind());
  }
}

}  // namespace
}  // namespace opdyn
