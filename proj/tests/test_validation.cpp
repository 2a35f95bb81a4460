#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "synthload/validation.hpp"
#include "test_support.hpp"

using namespace synthload;
using synthload::testing::alternating;
using synthload::testing::from_function;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST(MonthRanges, CoverTheYear) {
  const auto ranges = month_hour_ranges();
  EXPECT_EQ(ranges.front().first, 0u);
  EXPECT_EQ(ranges.back().second, kHoursPerYear);
  for (std::size_t m = 1; m < 12; ++m) EXPECT_EQ(ranges[m].first, ranges[m - 1].second);
  EXPECT_EQ(ranges[1].second - ranges[1].first, 28u * 24u);
}

TEST(MonthlyLoadFactor, ConstantSeriesIsAllOnes) {
  const auto lf = monthly_load_factors(HourlySeries::constant(3.0));
  ASSERT_EQ(lf.size(), 12u);
  for (double v : lf) EXPECT_EQ(v, 1.0);
}

TEST(MonthlyLoadFactor, OneSpikePerMonth) {
  // Month m has a single hour at 2, every other hour at 1: LF = (n + 1) / (2 n).
  const auto ranges = month_hour_ranges();
  std::vector<double> v(kHoursPerYear, 1.0);
  for (const auto& [a, b] : ranges) v[a + 5] = 2.0;
  const auto lf = monthly_load_factors(HourlySeries(v));
  for (std::size_t m = 0; m < 12; ++m) {
    const double n = static_cast<double>(ranges[m].second - ranges[m].first);
    EXPECT_NEAR(lf[m], (n + 1.0) / (2.0 * n), 1e-14);
  }
}

TEST(MonthlyLoadFactor, ZeroMonthIsAnError) {
  std::vector<double> v(kHoursPerYear, 1.0);
  for (std::size_t t = 0; t < 744; ++t) v[t] = 0.0;
  EXPECT_THROW(monthly_load_factors(HourlySeries(v)), Error);
}

TEST(DistributionCurve, ConstantSeriesIsPointMassAtOne) {
  const auto curve = distribution_curve(HourlySeries::constant(7.3));
  ASSERT_EQ(curve.fractions.size(), 60u);
  for (std::size_t i = 0; i < curve.fractions.size(); ++i) {
    if (i == 20) {
      EXPECT_NEAR(curve.fractions[i], 1.0, 1e-12);
      EXPECT_NEAR(curve.bin_centers[i], 1.025, 1e-12);
    } else {
      EXPECT_EQ(curve.fractions[i], 0.0) << "bin " << i;
    }
  }
}

TEST(DistributionCurve, TwoLevelSeries) {
  // Levels a and 3a average to 2a: half the hours at 0.5 p.u., half at 1.5 p.u.
  const auto curve = distribution_curve(alternating(2.0, 6.0));
  EXPECT_NEAR(curve.fractions[10], 0.5, 1e-12);
  EXPECT_NEAR(curve.fractions[30], 0.5, 1e-12);
}

TEST(DistributionCurve, OverflowLandsInLastBinAndMassIsOne) {
  std::vector<double> v(kHoursPerYear, 1.0);
  v[0] = 1e5;
  const auto curve = distribution_curve(HourlySeries(v));
  EXPECT_NEAR(curve.fractions.back(), 1.0 / 8760.0, 1e-15);
  double total = 0.0;
  for (double f : curve.fractions) total += f;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(DistributionCurve, ScaleInvariant) {
  const auto s = synthload::testing::fixture_series(3);
  std::vector<double> scaled = s.vector();
  for (auto& x : scaled) x *= 17.0;
  const auto a = distribution_curve(s);
  const auto b = distribution_curve(HourlySeries(scaled));
  for (std::size_t i = 0; i < a.fractions.size(); ++i) EXPECT_NEAR(a.fractions[i], b.fractions[i], 1.0 / 8760.0 + 1e-12);
}

TEST(DistributionCurve, BadWidthThrows) {
  EXPECT_THROW(distribution_curve(HourlySeries::constant(1.0), 0.0), Error);
  EXPECT_THROW(distribution_curve(HourlySeries::constant(0.0)), Error);
}

TEST(Autocorrelation, DailySineMatchesOracle) {
  const auto s = from_function([](std::size_t t) { return 5.0 + std::sin(2.0 * kPi * double(t) / 24.0); });
  const auto r = autocorrelation(s, 48);
  ASSERT_EQ(r.size(), 49u);
  EXPECT_EQ(r[0], 1.0);
  EXPECT_NEAR(r[12], -0.9986301369863013, 1e-12);
  EXPECT_NEAR(r[24], 0.9972602739726028, 1e-12);
  const auto v = s.vector();
  for (std::size_t k = 0; k <= 48; ++k) EXPECT_NEAR(r[k], synthload::testing::oracle_acf(v, k), 1e-12);
}

TEST(Autocorrelation, WhiteNoiseIsSmall) {
  std::mt19937 gen(5);
  std::normal_distribution<double> z(10.0, 1.0);
  const auto s = from_function([&](std::size_t) { return z(gen); });
  const auto r = autocorrelation(s, 48);
  for (std::size_t k = 1; k <= 48; ++k) EXPECT_LT(std::abs(r[k]), 4.0 / std::sqrt(8760.0)) << "lag " << k;
}

TEST(Autocorrelation, BoundedAndAffineInvariant) {
  const auto s = synthload::testing::fixture_series(12);
  std::vector<double> affine = s.vector();
  for (auto& x : affine) x = 3.0 * x + 100.0;
  const auto a = autocorrelation(s, 48);
  const auto b = autocorrelation(HourlySeries(affine), 48);
  for (std::size_t k = 0; k <= 48; ++k) {
    EXPECT_LE(std::abs(a[k]), 1.0 + 1e-12);
    EXPECT_NEAR(a[k], b[k], 1e-9);
  }
}

TEST(Autocorrelation, ConstantSeriesThrows) {
  EXPECT_THROW(autocorrelation(HourlySeries::constant(2.0), 48), Error);
  EXPECT_THROW(autocorrelation(synthload::testing::fixture_series(), 8760), Error);
}

TEST(Bands, ClosedIntervalMembership) {
  const auto band = make_reference_band(Metric::monthly_load_factor, {1, 2, 3}, {0.5, 0.5, 0.5}, {0.8, 0.8, 0.8});
  const std::vector<double> axis{1, 2, 3};
  const auto v = band_check(axis, std::vector<double>{0.5, 0.8, 0.81}, band);
  EXPECT_EQ(v.inside, (std::vector<bool>{true, true, false}));
  EXPECT_NEAR(v.pass_fraction, 2.0 / 3.0, 1e-15);
  const auto all = band_check(axis, std::vector<double>{0.6, 0.7, 0.7}, band);
  EXPECT_EQ(all.pass_fraction, 1.0);
}

TEST(Bands, AxisMismatchAndMalformedBands) {
  const auto band = make_reference_band(Metric::autocorrelation, {0, 1}, {0, 0}, {1, 1});
  EXPECT_THROW(band_check(std::vector<double>{0, 1, 2}, std::vector<double>{1, 1, 1}, band), Error);
  EXPECT_THROW(band_check(std::vector<double>{0, 2}, std::vector<double>{1, 1}, band), Error);
  EXPECT_THROW(make_reference_band(Metric::autocorrelation, {}, {}, {}), Error);
  EXPECT_THROW(make_reference_band(Metric::autocorrelation, {0, 1}, {0, 2}, {1, 1}), Error);
  EXPECT_THROW(make_reference_band(Metric::autocorrelation, {1, 0}, {0, 0}, {1, 1}), Error);
}

TEST(Bands, WideningNeverLowersPassFraction) {
  std::mt19937 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> axis, values, lo, hi;
  for (int i = 0; i < 30; ++i) {
    axis.push_back(i);
    values.push_back(u(gen));
    lo.push_back(0.3);
    hi.push_back(0.6);
  }
  double previous = band_check(axis, values, make_reference_band(Metric::autocorrelation, axis, lo, hi)).pass_fraction;
  for (int step = 0; step < 6; ++step) {
    for (auto& x : lo) x -= 0.05;
    for (auto& x : hi) x += 0.05;
    const double f = band_check(axis, values, make_reference_band(Metric::autocorrelation, axis, lo, hi)).pass_fraction;
    EXPECT_GE(f, previous);
    previous = f;
  }
}

TEST(Bands, FileRoundTripWithCommentLines) {
  const auto band = default_autocorrelation_band(48);
  const auto text = "# qualitative envelope\n" + serialize_band(band);
  const auto back = parse_band(text, Metric::autocorrelation, "acf.csv");
  EXPECT_EQ(back.axis, band.axis);
  EXPECT_EQ(back.lower, band.lower);
  EXPECT_EQ(back.upper, band.upper);
  EXPECT_THROW(parse_band("axis,lower,upper\n1,0.9,0.1\n", Metric::autocorrelation), Error);
}

TEST(Report, ConstantSeriesKeepsLfAndFlagsAcf) {
  const auto report = evaluate_series(HourlySeries::constant(4.0, "flat"), ValidationBands{});
  ASSERT_EQ(report.metrics.size(), 3u);
  EXPECT_TRUE(report.metrics[0].error.empty());
  EXPECT_EQ(report.metrics[0].values, std::vector<double>(12, 1.0));
  EXPECT_FALSE(report.metrics[2].error.empty());
  EXPECT_EQ(report.metrics[2].pass_fraction, 0.0);
}

TEST(Report, MetricsMatchDirectComputation) {
  const auto s = synthload::testing::fixture_series(6);
  ValidationOptions opt;
  opt.max_lag = 30;
  const auto report = evaluate_series(s, ValidationBands{default_monthly_lf_band(), default_distribution_band(),
                                                         default_autocorrelation_band(30)},
                                      opt);
  EXPECT_EQ(report.metrics[0].values, monthly_load_factors(s));
  EXPECT_EQ(report.metrics[1].values, distribution_curve(s).fractions);
  EXPECT_EQ(report.metrics[2].values, autocorrelation(s, 30));
  EXPECT_EQ(report.metrics[2].axis.size(), 31u);
  for (const auto& m : report.metrics) {
    EXPECT_TRUE(m.error.empty());
    EXPECT_EQ(m.inside.size(), m.values.size());
  }
}
