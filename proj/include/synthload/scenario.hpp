#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "synthload/core_types.hpp"
#include "synthload/ingest.hpp"
#include "synthload/rng.hpp"

namespace synthload {

struct DuckCurveConfig {
  double system_btm_capacity_mw = 30000.0;
  double load_weight = 0.5;   // weight on normalized non-industrial load size
  double solar_weight = 0.5;  // weight on normalized solar resource
  std::size_t day_index = 130;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(system_btm_capacity_mw >= 0.0) || !std::isfinite(system_btm_capacity_mw)) {
      throw Error("BTM capacity must be non-negative");
    }
    if (!(load_weight >= 0.0 && solar_weight >= 0.0)) throw Error("potential weights must be non-negative");
    if (std::abs(load_weight + solar_weight - 1.0) > 1e-9) throw Error("potential weights must sum to 1");
    if (day_index >= kDaysPerYear) throw Error("day index must lie in [0, 364]");
  }
};

/// Weighted sum of the bus's normalized non-industrial load and normalized solar resource.
inline double btm_potential(double load, double max_load, double solar, double max_solar, double load_weight,
                            double solar_weight) {
  if (!(max_load > 0.0) || !(max_solar > 0.0)) throw Error("potential normalizers must be positive");
  return load_weight * (load / max_load) + solar_weight * (solar / max_solar);
}

/// Splits the system capacity in proportion to each bus's potential.
inline std::vector<double> allocate_btm_capacity(std::span<const double> potentials, double system_capacity_mw) {
  double total = 0.0;
  for (double p : potentials) {
    if (!(p >= 0.0)) throw Error("potentials must be non-negative");
    total += p;
  }
  if (!(total > 0.0)) throw Error("all BTM potentials are zero");
  std::vector<double> caps;
  caps.reserve(potentials.size());
  for (double p : potentials) caps.push_back(system_capacity_mw * p / total);
  return caps;
}

/// One day of behind-the-meter output with the hours that anchor its shape.
struct BtmSolarDay {
  int start_hour = 6;
  int peak_hour = 14;
  int end_hour = 20;
  std::array<double, kHoursPerDay> output_mw{};
};

/// Piecewise-linear day: zero through `start`, rising to `capacity` at `peak`,
/// falling back to zero at `end`.
inline BtmSolarDay btm_solar_profile(double capacity_mw, int start_hour, int peak_hour, int end_hour) {
  if (!(capacity_mw >= 0.0)) throw Error("BTM capacity must be non-negative");
  if (!(0 <= start_hour && start_hour < peak_hour && peak_hour < end_hour && end_hour < 24)) {
    throw Error("BTM anchors must satisfy 0 <= start < peak < end < 24");
  }
  BtmSolarDay day{start_hour, peak_hour, end_hour, {}};
  for (int h = start_hour; h <= end_hour; ++h) {
    double frac = h <= peak_hour ? static_cast<double>(h - start_hour) / (peak_hour - start_hour)
                                 : static_cast<double>(end_hour - h) / (end_hour - peak_hour);
    day.output_mw[static_cast<std::size_t>(h)] = capacity_mw * frac;
  }
  day.output_mw[static_cast<std::size_t>(peak_hour)] = capacity_mw;
  return day;
}

/// Draws start in {6,7,8}, peak in {13,14,15} and end in {18,19,20}.
inline BtmSolarDay btm_solar_profile(double capacity_mw, Rng& rng) {
  const int start = 6 + static_cast<int>(rng.below(3));
  const int peak = 13 + static_cast<int>(rng.below(3));
  const int end = 18 + static_cast<int>(rng.below(3));
  return btm_solar_profile(capacity_mw, start, peak, end);
}

/// Solar resource at the record nearest the bus (ties by record order).
inline double nearest_solar_resource(const GeoPoint& where, std::span<const SolarResourceRecord> solar) {
  if (solar.empty()) throw Error("no solar resource records");
  const SolarResourceRecord* best = nullptr;
  double best_km = 0.0;
  for (const auto& r : solar) {
    const double km = great_circle_km(where, r.location);
    if (!best || km < best_km) {
      best = &r;
      best_km = km;
    }
  }
  return best->avg_output;
}

struct DuckCurveBus {
  std::int64_t bus_id = 0;
  double potential = 0.0;
  double btm_capacity_mw = 0.0;
  BtmSolarDay solar;
  std::array<double, kHoursPerDay> benchmark_mw{};
  std::array<double, kHoursPerDay> net_mw{};
};

struct DuckCurveResult {
  std::size_t day_index = 0;
  std::vector<DuckCurveBus> buses;
  std::array<double, kHoursPerDay> system_benchmark_mw{};
  std::array<double, kHoursPerDay> system_net_mw{};
};

struct ScenarioBus {
  LoadBus bus;
  CompositionRatio ratio;
  const HourlySeries* benchmark = nullptr;
};

/// Subtracts a per-bus behind-the-meter solar day from the benchmark load on
/// `day_index`. Net load is clamped at zero (no export).
inline DuckCurveResult apply_duck_curve(std::span<const ScenarioBus> buses, std::span<const SolarResourceRecord> solar,
                                        const DuckCurveConfig& config) {
  config.validate();
  if (buses.empty()) throw Error("duck curve needs at least one bus");

  std::vector<double> load(buses.size()), resource(buses.size());
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (!buses[i].benchmark) throw Error("bus " + std::to_string(buses[i].bus.bus_id) + " has no benchmark series");
    load[i] = buses[i].bus.peak_mw * (buses[i].ratio.residential + buses[i].ratio.commercial);
    resource[i] = nearest_solar_resource(buses[i].bus.location, solar);
  }
  const double max_load = *std::max_element(load.begin(), load.end());
  const double max_resource = *std::max_element(resource.begin(), resource.end());

  DuckCurveResult out;
  out.day_index = config.day_index;
  std::vector<double> potentials(buses.size());
  for (std::size_t i = 0; i < buses.size(); ++i) {
    potentials[i] = btm_potential(load[i], max_load, resource[i], max_resource, config.load_weight,
                                  config.solar_weight);
  }
  std::vector<double> caps(buses.size(), 0.0);
  if (config.system_btm_capacity_mw > 0.0) caps = allocate_btm_capacity(potentials, config.system_btm_capacity_mw);

  const std::size_t first_hour = config.day_index * kHoursPerDay;
  for (std::size_t i = 0; i < buses.size(); ++i) {
    Rng rng(substream_seed(config.seed, static_cast<std::uint64_t>(buses[i].bus.bus_id)));
    DuckCurveBus b;
    b.bus_id = buses[i].bus.bus_id;
    b.potential = potentials[i];
    b.btm_capacity_mw = caps[i];
    b.solar = btm_solar_profile(caps[i], rng);
    for (std::size_t h = 0; h < kHoursPerDay; ++h) {
      b.benchmark_mw[h] = (*buses[i].benchmark)[first_hour + h];
      b.net_mw[h] = std::max(0.0, b.benchmark_mw[h] - b.solar.output_mw[h]);
      out.system_benchmark_mw[h] += b.benchmark_mw[h];
      out.system_net_mw[h] += b.net_mw[h];
    }
    out.buses.push_back(b);
  }
  return out;
}

}  // namespace synthload
