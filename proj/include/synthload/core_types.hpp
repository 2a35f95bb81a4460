#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace synthload {

/// Hours in the (non-leap) synthesis year. Hour 0 is Jan 1, 00:00.
inline constexpr std::size_t kHoursPerYear = 8760;
inline constexpr std::size_t kHoursPerDay = 24;
inline constexpr std::size_t kDaysPerYear = 365;

/// Every failure in the library surfaces as this exception type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LoadKind { residential, commercial, industrial, feeder };

/// The three customer classes a bus load is split into.
enum class LoadType { residential = 0, commercial = 1, industrial = 2 };

inline constexpr std::array<LoadType, 3> kLoadTypes = {
    LoadType::residential, LoadType::commercial, LoadType::industrial};

inline std::string_view to_string(LoadKind k) {
  switch (k) {
    case LoadKind::residential: return "residential";
    case LoadKind::commercial: return "commercial";
    case LoadKind::industrial: return "industrial";
    case LoadKind::feeder: return "feeder";
  }
  return "unknown";
}

inline std::string_view to_string(LoadType t) {
  switch (t) {
    case LoadType::residential: return "residential";
    case LoadType::commercial: return "commercial";
    case LoadType::industrial: return "industrial";
  }
  return "unknown";
}

inline LoadKind parse_load_kind(std::string_view s) {
  if (s == "residential") return LoadKind::residential;
  if (s == "commercial") return LoadKind::commercial;
  if (s == "industrial") return LoadKind::industrial;
  if (s == "feeder") return LoadKind::feeder;
  throw Error("unknown load kind '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// HourlySeries
// ---------------------------------------------------------------------------

/// One year of hourly real power (MW). Always 8760 finite, non-negative values.
class HourlySeries {
 public:
  HourlySeries() : values_(kHoursPerYear, 0.0) {}

  explicit HourlySeries(std::vector<double> values, std::string label = {})
      : values_(std::move(values)), label_(std::move(label)) {
    if (values_.size() != kHoursPerYear) {
      throw Error("series '" + label_ + "' has " + std::to_string(values_.size()) +
                  " values, expected 8760");
    }
    for (std::size_t t = 0; t < values_.size(); ++t) {
      if (!std::isfinite(values_[t]) || values_[t] < 0.0) {
        throw Error("series '" + label_ + "' has invalid value at hour " + std::to_string(t));
      }
    }
  }

  static HourlySeries constant(double value, std::string label = {}) {
    return HourlySeries(std::vector<double>(kHoursPerYear, value), std::move(label));
  }

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] const std::vector<double>& vector() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t t) const { return values_[t]; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }

  [[nodiscard]] double max() const { return *std::max_element(values_.begin(), values_.end()); }
  [[nodiscard]] double min() const { return *std::min_element(values_.begin(), values_.end()); }

  [[nodiscard]] HourlySeries relabeled(std::string label) const {
    HourlySeries out = *this;
    out.label_ = std::move(label);
    return out;
  }

  friend bool operator==(const HourlySeries& a, const HourlySeries& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<double> values_;
  std::string label_;
};

// ---------------------------------------------------------------------------
// Geography and buses
// ---------------------------------------------------------------------------

struct GeoPoint {
  double latitude = 0.0;
  double longitude = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
  friend auto operator<=>(const GeoPoint&, const GeoPoint&) = default;
};

inline GeoPoint make_geo_point(double latitude, double longitude) {
  if (!(latitude >= -90.0 && latitude <= 90.0)) {
    throw Error("latitude out of range: " + std::to_string(latitude));
  }
  if (!(longitude >= -180.0 && longitude <= 180.0)) {
    throw Error("longitude out of range: " + std::to_string(longitude));
  }
  return {latitude, longitude};
}

inline constexpr double kEarthRadiusKm = 6371.0;

/// Great-circle (haversine) distance in km on a spherical Earth.
inline double great_circle_km(const GeoPoint& a, const GeoPoint& b) {
  constexpr double kDeg = 3.14159265358979323846 / 180.0;
  const double dlat = (b.latitude - a.latitude) * kDeg;
  const double dlon = (b.longitude - a.longitude) * kDeg;
  const double s = std::sin(dlat / 2.0);
  const double c = std::sin(dlon / 2.0);
  const double h = s * s + std::cos(a.latitude * kDeg) * std::cos(b.latitude * kDeg) * c * c;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

struct LoadBus {
  std::int64_t bus_id = 0;
  GeoPoint location;
  double peak_mw = 0.0;
  double power_factor = 1.0;
};

inline LoadBus make_load_bus(std::int64_t bus_id, GeoPoint location, double peak_mw,
                             double power_factor) {
  if (!(peak_mw > 0.0) || !std::isfinite(peak_mw)) throw Error("peak must be positive");
  if (!(power_factor > 0.0 && power_factor <= 1.0)) {
    throw Error("power factor must lie in (0, 1]");
  }
  return {bus_id, make_geo_point(location.latitude, location.longitude), peak_mw, power_factor};
}

/// Residential / commercial / industrial split of a bus load.
struct CompositionRatio {
  double residential = 1.0;
  double commercial = 0.0;
  double industrial = 0.0;

  [[nodiscard]] double operator[](LoadType t) const {
    switch (t) {
      case LoadType::residential: return residential;
      case LoadType::commercial: return commercial;
      case LoadType::industrial: return industrial;
    }
    return 0.0;
  }

  friend bool operator==(const CompositionRatio&, const CompositionRatio&) = default;
};

inline CompositionRatio make_composition_ratio(double residential, double commercial,
                                               double industrial) {
  for (double f : {residential, commercial, industrial}) {
    if (!(f >= 0.0 && f <= 1.0)) throw Error("composition fraction outside [0, 1]");
  }
  if (std::abs(residential + commercial + industrial - 1.0) > 1e-9) {
    throw Error("composition fractions must sum to 1");
  }
  return {residential, commercial, industrial};
}

// ---------------------------------------------------------------------------
// Series statistics
// ---------------------------------------------------------------------------

inline double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double series_mean(const HourlySeries& s) { return mean_of(s.values()); }

/// Average over peak for an arbitrary window of hourly values.
inline double load_factor_of(std::span<const double> v) {
  if (v.empty()) throw Error("degenerate series");
  const double peak = *std::max_element(v.begin(), v.end());
  if (!(peak > 0.0)) throw Error("degenerate series");
  return mean_of(v) / peak;
}

inline double load_factor(const HourlySeries& s) { return load_factor_of(s.values()); }

/// out[t] = in[(t - k) mod 8760]; positive k delays the profile.
inline HourlySeries circular_shift(const HourlySeries& s, std::int64_t k) {
  const auto n = static_cast<std::int64_t>(kHoursPerYear);
  const auto offset = static_cast<std::size_t>(((k % n) + n) % n);
  std::vector<double> out(kHoursPerYear);
  std::rotate_copy(s.vector().begin(), s.vector().end() - static_cast<std::ptrdiff_t>(offset),
                   s.vector().end(), out.begin());
  return HourlySeries(std::move(out), s.label());
}

}  // namespace synthload
