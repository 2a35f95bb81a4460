#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synthload/core_types.hpp"
#include "synthload/csv.hpp"

namespace synthload {

inline constexpr std::array<std::size_t, 12> kDaysInMonth = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

/// [first hour, one past last hour) of each calendar month.
inline std::array<std::pair<std::size_t, std::size_t>, 12> month_hour_ranges() {
  std::array<std::pair<std::size_t, std::size_t>, 12> ranges{};
  std::size_t start = 0;
  for (std::size_t m = 0; m < 12; ++m) {
    const std::size_t end = start + kDaysInMonth[m] * kHoursPerDay;
    ranges[m] = {start, end};
    start = end;
  }
  return ranges;
}

inline std::vector<double> monthly_load_factors(const HourlySeries& s) {
  std::vector<double> out;
  out.reserve(12);
  const auto v = s.values();
  for (const auto& [begin, end] : month_hour_ranges()) {
    const auto month = v.subspan(begin, end - begin);
    if (*std::max_element(month.begin(), month.end()) <= 0.0) {
      throw Error("month starting at hour " + std::to_string(begin) + " is all zero");
    }
    out.push_back(load_factor_of(month));
  }
  return out;
}

inline constexpr double kDistributionRangePu = 3.0;
inline constexpr double kDefaultBinWidthPu = 0.05;

struct DistributionCurve {
  double bin_width = kDefaultBinWidthPu;
  std::vector<double> bin_centers;
  std::vector<double> fractions;
};

/// Share of hours spent at each load level, in per unit of the series mean.
/// Bins are [i w, (i+1) w) over [0, 3] p.u.; anything above lands in the last bin.
inline DistributionCurve distribution_curve(const HourlySeries& s, double bin_width_pu = kDefaultBinWidthPu) {
  if (!(bin_width_pu > 0.0) || !std::isfinite(bin_width_pu)) throw Error("bin width must be positive");
  const double mean = series_mean(s);
  if (!(mean > 0.0)) throw Error("distribution curve of a zero-mean series");

  const auto bins = static_cast<std::size_t>(std::ceil(kDistributionRangePu / bin_width_pu - 1e-9));
  DistributionCurve curve;
  curve.bin_width = bin_width_pu;
  curve.fractions.assign(bins, 0.0);
  for (std::size_t i = 0; i < bins; ++i) curve.bin_centers.push_back((static_cast<double>(i) + 0.5) * bin_width_pu);

  const double weight = 1.0 / static_cast<double>(s.size());
  for (double x : s.values()) {
    // The small offset keeps values on a bin edge (e.g. exactly 1.0 p.u.) in the bin
    // they open despite representation error in the width.
    const double pos = (x / mean) / bin_width_pu + 1e-9;
    const auto idx = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(pos))), bins - 1);
    curve.fractions[idx] += weight;
  }
  return curve;
}

/// Biased sample autocorrelation for lags 0..max_lag.
inline std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
  if (max_lag >= x.size()) throw Error("max lag must be shorter than the series");
  const double mean = mean_of(x);
  std::vector<double> d(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) d[t] = x[t] - mean;
  double denom = 0.0;
  for (double v : d) denom += v * v;
  if (!(denom > 0.0)) throw Error("zero variance");

  std::vector<double> r(max_lag + 1);
  r[0] = 1.0;
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double num = 0.0;
    for (std::size_t t = 0; t + k < d.size(); ++t) num += d[t] * d[t + k];
    r[k] = num / denom;
  }
  return r;
}

inline std::vector<double> autocorrelation(const HourlySeries& s, std::size_t max_lag) {
  return autocorrelation(s.values(), max_lag);
}

// ---------------------------------------------------------------------------
// Reference bands
// ---------------------------------------------------------------------------

enum class Metric { monthly_load_factor, distribution_curve, autocorrelation };

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::monthly_load_factor: return "monthly_load_factor";
    case Metric::distribution_curve: return "distribution_curve";
    case Metric::autocorrelation: return "autocorrelation";
  }
  return "unknown";
}

struct ReferenceBand {
  Metric metric = Metric::monthly_load_factor;
  std::vector<double> axis;
  std::vector<double> lower;
  std::vector<double> upper;
};

inline ReferenceBand make_reference_band(Metric metric, std::vector<double> axis, std::vector<double> lower,
                                         std::vector<double> upper) {
  if (axis.empty()) throw Error("reference band axis is empty");
  if (axis.size() != lower.size() || axis.size() != upper.size()) {
    throw Error("reference band columns differ in length");
  }
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (lower[i] > upper[i]) throw Error("reference band lower exceeds upper at axis " + csv::format_double(axis[i]));
    if (i > 0 && !(axis[i] > axis[i - 1])) throw Error("reference band axis must be strictly increasing");
  }
  return {metric, std::move(axis), std::move(lower), std::move(upper)};
}

struct BandVerdict {
  std::vector<bool> inside;
  double pass_fraction = 0.0;
};

/// Closed-interval membership of each value in the band.
inline BandVerdict band_check(std::span<const double> axis, std::span<const double> values, const ReferenceBand& band) {
  if (band.axis.empty()) throw Error("reference band axis is empty");
  if (axis.size() != values.size()) throw Error("metric axis and values differ in length");
  if (axis.size() != band.axis.size()) {
    throw Error(std::string("axis mismatch for ") + std::string(to_string(band.metric)) + ": metric has " +
                std::to_string(axis.size()) + " points, band has " + std::to_string(band.axis.size()));
  }
  BandVerdict verdict;
  std::size_t passed = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(axis[i] - band.axis[i]) > 1e-9 * std::max(1.0, std::abs(axis[i]))) {
      throw Error(std::string("axis mismatch for ") + std::string(to_string(band.metric)) + " at point " +
                  std::to_string(i));
    }
    const bool ok = band.lower[i] <= values[i] && values[i] <= band.upper[i];
    verdict.inside.push_back(ok);
    passed += ok ? 1 : 0;
  }
  verdict.pass_fraction = static_cast<double>(passed) / static_cast<double>(values.size());
  return verdict;
}

// Band file: axis,lower,upper
inline constexpr std::string_view kBandHeader = "axis,lower,upper";

inline ReferenceBand parse_band(std::string_view text, Metric metric, std::string_view source = "band") {
  csv::LineReader reader(text);
  std::string_view line;
  do {
    if (!reader.next(line)) throw Error(std::string(source) + ": empty band file");
  } while (csv::trim(line).empty() || line.front() == '#');
  csv::expect_header(line, kBandHeader, source);
  std::vector<double> axis, lower, upper;
  while (reader.next(line)) {
    if (csv::trim(line).empty() || line.front() == '#') continue;
    const auto ctx = csv::where(source, reader.line_no());
    const auto f = csv::split(line);
    if (f.size() != 3) throw Error(ctx + "expected 3 fields");
    axis.push_back(csv::parse_double(f[0], ctx));
    lower.push_back(csv::parse_double(f[1], ctx));
    upper.push_back(csv::parse_double(f[2], ctx));
  }
  try {
    return make_reference_band(metric, std::move(axis), std::move(lower), std::move(upper));
  } catch (const Error& e) {
    throw Error(std::string(source) + ": " + e.what());
  }
}

inline std::string serialize_band(const ReferenceBand& band) {
  std::string out(kBandHeader);
  out += '\n';
  for (std::size_t i = 0; i < band.axis.size(); ++i) {
    csv::append_double(out, band.axis[i]);
    out += ',';
    csv::append_double(out, band.lower[i]);
    out += ',';
    csv::append_double(out, band.upper[i]);
    out += '\n';
  }
  return out;
}

// Default bands. These are qualitative envelopes of published system-level load
// behaviour, not fitted to any particular data set.

inline ReferenceBand default_monthly_lf_band() {
  std::vector<double> axis, lower, upper;
  for (int m = 1; m <= 12; ++m) {
    axis.push_back(m);
    const bool summer = m >= 6 && m <= 9;
    lower.push_back(summer ? 0.50 : 0.45);
    upper.push_back(summer ? 0.92 : 0.90);
  }
  return make_reference_band(Metric::monthly_load_factor, axis, lower, upper);
}

/// Mass between 0.4 and 1.8 p.u., densest between 0.8 and 1.2.
inline ReferenceBand default_distribution_band(double bin_width_pu = kDefaultBinWidthPu) {
  const auto bins = static_cast<std::size_t>(std::ceil(kDistributionRangePu / bin_width_pu - 1e-9));
  std::vector<double> axis, lower, upper;
  for (std::size_t i = 0; i < bins; ++i) {
    const double c = (static_cast<double>(i) + 0.5) * bin_width_pu;
    axis.push_back(c);
    lower.push_back(0.0);
    double cap = 0.01 * bin_width_pu / 0.05;
    if (c >= 0.4 && c <= 1.8) cap = 0.15 * bin_width_pu / 0.05;
    if (c >= 0.8 && c <= 1.2) cap = 0.25 * bin_width_pu / 0.05;
    upper.push_back(std::min(1.0, cap));
  }
  return make_reference_band(Metric::distribution_curve, axis, lower, upper);
}

/// Daily-cycle envelope: near 1 at multiples of 24 h, lowest around 12 h.
inline ReferenceBand default_autocorrelation_band(std::size_t max_lag = 48) {
  constexpr double kPi = 3.14159265358979323846;
  std::vector<double> axis, lower, upper;
  for (std::size_t k = 0; k <= max_lag; ++k) {
    const double lag = static_cast<double>(k);
    const double decay = std::pow(0.97, lag / 24.0);
    const double center = decay * (0.45 + 0.55 * std::cos(2.0 * kPi * lag / 24.0));
    axis.push_back(lag);
    if (k == 0) {
      lower.push_back(1.0);
      upper.push_back(1.0);
    } else {
      lower.push_back(std::max(-1.0, center - 0.45));
      upper.push_back(std::min(1.0, center + 0.35));
    }
  }
  return make_reference_band(Metric::autocorrelation, axis, lower, upper);
}


// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct MetricResult {
  Metric metric = Metric::monthly_load_factor;
  std::vector<double> axis;
  std::vector<double> values;
  std::vector<bool> inside;
  double pass_fraction = 0.0;
  std::string error;  // non-empty when the metric is undefined for the series
};

struct SeriesReport {
  std::string label;
  std::vector<MetricResult> metrics;
};

struct ValidationBands {
  ReferenceBand monthly_load_factor = default_monthly_lf_band();
  ReferenceBand distribution_curve = default_distribution_band();
  ReferenceBand autocorrelation = default_autocorrelation_band();

  [[nodiscard]] const ReferenceBand& operator[](Metric m) const {
    switch (m) {
      case Metric::monthly_load_factor: return monthly_load_factor;
      case Metric::distribution_curve: return distribution_curve;
      case Metric::autocorrelation: return autocorrelation;
    }
    return monthly_load_factor;
  }
};

struct ValidationOptions {
  std::size_t max_lag = 48;
  double bin_width_pu = kDefaultBinWidthPu;
};

/// Runs the three metrics on one series. A metric that is undefined for the
/// series (e.g. autocorrelation of a constant load) is reported with an error
/// and a zero pass fraction instead of aborting the report.
inline SeriesReport evaluate_series(const HourlySeries& s, const ValidationBands& bands,
                                    const ValidationOptions& opt = {}) {
  SeriesReport report;
  report.label = s.label();
  auto run = [&](Metric metric, auto&& compute) {
    MetricResult r;
    r.metric = metric;
    try {
      compute(r);
    } catch (const Error& e) {
      r.error = e.what();
      r.values.clear();
      r.axis.clear();
      report.metrics.push_back(std::move(r));
      return;
    }
    const auto verdict = band_check(r.axis, r.values, bands[metric]);
    r.inside = verdict.inside;
    r.pass_fraction = verdict.pass_fraction;
    report.metrics.push_back(std::move(r));
  };

  run(Metric::monthly_load_factor, [&](MetricResult& r) {
    r.values = monthly_load_factors(s);
    for (int m = 1; m <= 12; ++m) r.axis.push_back(m);
  });
  run(Metric::distribution_curve, [&](MetricResult& r) {
    auto curve = distribution_curve(s, opt.bin_width_pu);
    r.axis = std::move(curve.bin_centers);
    r.values = std::move(curve.fractions);
  });
  run(Metric::autocorrelation, [&](MetricResult& r) {
    r.values = autocorrelation(s, opt.max_lag);
    for (std::size_t k = 0; k <= opt.max_lag; ++k) r.axis.push_back(static_cast<double>(k));
  });
  return report;
}

}  // namespace synthload
