#pragma once

// Fixtures and independent reference computations shared by the unit suites.
// Oracles here deliberately avoid calling the library routine they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "synthload/core_types.hpp"

namespace synthload::testing {

inline HourlySeries alternating(double a, double b) {
  std::vector<double> v(kHoursPerYear);
  for (std::size_t t = 0; t < v.size(); ++t) v[t] = (t % 2 == 0) ? a : b;
  return HourlySeries(std::move(v));
}

inline HourlySeries from_function(auto&& f) {
  std::vector<double> v(kHoursPerYear);
  for (std::size_t t = 0; t < v.size(); ++t) v[t] = f(t);
  return HourlySeries(std::move(v));
}

/// Arbitrary positive fixture with daily and seasonal structure plus noise.
inline HourlySeries fixture_series(std::uint32_t seed = 7) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(kHoursPerYear);
  for (std::size_t t = 0; t < v.size(); ++t) {
    const double daily = std::sin(2.0 * 3.14159265358979 * static_cast<double>(t % 24) / 24.0);
    const double season = std::cos(2.0 * 3.14159265358979 * static_cast<double>(t) / 8760.0);
    v[t] = 10.0 + 3.0 * daily + 2.0 * season + u(gen);
  }
  return HourlySeries(std::move(v), "fixture");
}

// --- oracles ---------------------------------------------------------------

inline long double oracle_sum(const HourlySeries& s) {
  long double total = 0.0L;
  for (std::size_t t = 0; t < s.size(); ++t) total += s[t];
  return total;
}

inline double oracle_mean(const HourlySeries& s) {
  return static_cast<double>(oracle_sum(s) / static_cast<long double>(s.size()));
}

/// Straight double loop over the definition of the biased ACF.
inline double oracle_acf(const std::vector<double>& x, std::size_t lag) {
  long double mean = 0.0L;
  for (double v : x) mean += v;
  mean /= static_cast<long double>(x.size());
  long double num = 0.0L, den = 0.0L;
  for (std::size_t t = 0; t < x.size(); ++t) {
    den += (x[t] - mean) * (x[t] - mean);
    if (t + lag < x.size()) num += (x[t] - mean) * (x[t + lag] - mean);
  }
  return static_cast<double>(num / den);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Spherical law of cosines; independent of the haversine route.
inline double oracle_distance_km(GeoPoint a, GeoPoint b) {
  constexpr double kDeg = 3.14159265358979323846 / 180.0;
  const double c = std::sin(a.latitude * kDeg) * std::sin(b.latitude * kDeg) +
                   std::cos(a.latitude * kDeg) * std::cos(b.latitude * kDeg) *
                       std::cos((b.longitude - a.longitude) * kDeg);
  return 6371.0 * std::acos(std::clamp(c, -1.0, 1.0));
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("synthload_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace synthload::testing
