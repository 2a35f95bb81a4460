#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "synthload/core_types.hpp"
#include "synthload/ingest.hpp"
#include "synthload/rng.hpp"

namespace synthload {

/// Non-owning view of candidate profiles; the corpus outlives every pool.
using ProfilePool = std::vector<const PrototypeProfile*>;

inline constexpr std::size_t kNearestLocations = 5;

namespace detail {

/// Profiles of `kind` at the `count` locations nearest `where`, ordered by
/// (distance, profile_id).
inline ProfilePool nearest_location_pool(const GeoPoint& where, std::span<const PrototypeProfile> corpus,
                                         LoadKind kind, std::size_t count) {
  struct Site {
    double km;
    std::string first_id;
  };
  std::map<GeoPoint, Site> sites;
  for (const auto& p : corpus) {
    if (p.kind != kind) continue;
    auto [it, inserted] = sites.try_emplace(p.location, Site{great_circle_km(where, p.location), p.profile_id});
    if (!inserted) it->second.first_id = std::min(it->second.first_id, p.profile_id);
  }
  if (sites.empty()) throw Error(std::string("corpus has no ") + std::string(to_string(kind)) + " profiles");

  std::vector<std::pair<GeoPoint, Site>> ranked(sites.begin(), sites.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second.km, a.second.first_id) < std::tie(b.second.km, b.second.first_id);
  });
  ranked.resize(std::min(count, ranked.size()));

  std::map<GeoPoint, double> chosen;
  for (const auto& [loc, site] : ranked) chosen.emplace(loc, site.km);

  ProfilePool pool;
  for (const auto& p : corpus) {
    if (p.kind == kind && chosen.contains(p.location)) pool.push_back(&p);
  }
  std::sort(pool.begin(), pool.end(), [&](const PrototypeProfile* a, const PrototypeProfile* b) {
    return std::tie(chosen.at(a->location), a->profile_id) < std::tie(chosen.at(b->location), b->profile_id);
  });
  return pool;
}

}  // namespace detail

/// Residential profiles at the five TMY-style locations nearest the bus.
inline ProfilePool residential_pool(const LoadBus& bus, std::span<const PrototypeProfile> corpus) {
  return detail::nearest_location_pool(bus.location, corpus, LoadKind::residential, kNearestLocations);
}

/// Every commercial building type at the five nearest locations (up to 80 profiles).
/// Locations missing some of the 16 types yield a smaller pool and a warning.
inline ProfilePool commercial_pool(const LoadBus& bus, std::span<const PrototypeProfile> corpus,
                                   std::vector<std::string>* warnings = nullptr) {
  auto pool = detail::nearest_location_pool(bus.location, corpus, LoadKind::commercial, kNearestLocations);
  if (warnings) {
    std::map<GeoPoint, std::set<std::string>> types;
    for (const auto* p : pool) types[p->location].insert(p->subtype);
    for (const auto& [loc, subtypes] : types) {
      if (subtypes.size() < 16) {
        warnings->push_back("bus " + std::to_string(bus.bus_id) + ": commercial location (" +
                            std::to_string(loc.latitude) + ", " + std::to_string(loc.longitude) + ") has " +
                            std::to_string(subtypes.size()) + " of 16 building types");
      }
    }
  }
  return pool;
}

/// Industrial profiles whose peak lies below the bus's industrial component peak.
/// When none qualify, the single profile with the smallest peak stands in.
inline ProfilePool industrial_pool(double target_peak_mw, std::span<const PrototypeProfile> facility_profiles) {
  if (!(target_peak_mw >= 0.0)) throw Error("industrial target peak must be non-negative");
  ProfilePool pool;
  if (target_peak_mw == 0.0) return pool;

  const PrototypeProfile* smallest = nullptr;
  double smallest_max = 0.0;
  for (const auto& p : facility_profiles) {
    if (p.kind != LoadKind::industrial) continue;
    const double m = p.series.max();
    if (m < target_peak_mw) pool.push_back(&p);
    if (!smallest || std::tie(m, p.profile_id) < std::tie(smallest_max, smallest->profile_id)) {
      smallest = &p;
      smallest_max = m;
    }
  }
  if (!smallest) throw Error("corpus has no industrial profiles");
  if (pool.empty()) pool.push_back(smallest);
  std::sort(pool.begin(), pool.end(),
            [](const PrototypeProfile* a, const PrototypeProfile* b) { return a->profile_id < b->profile_id; });
  return pool;
}

/// Days of operation implied by yearly operating hours: nearest integer (ties up),
/// clamped to [1, 365].
inline std::size_t operating_days(double annual_operating_hours) {
  const double days = std::floor(annual_operating_hours / 24.0 + 0.5);
  return static_cast<std::size_t>(std::clamp(days, 1.0, 365.0));
}

inline constexpr double kIndustrialNoiseSigma = 0.02;

/// Expands a sector's per-unit daily curve into one facility's year.
///
/// The curve is tiled over the facility's operating days starting at a random
/// day (wrapping past Dec 31); idle days run at the curve's minimum. A 2%
/// multiplicative Gaussian noise is applied and the year is rescaled so its
/// hourly sum equals the facility's annual energy.
inline PrototypeProfile synthesize_industrial_year(const IndustrialFacilityRecord& rec,
                                                   const DailySectorCurve& curve, std::uint64_t seed,
                                                   GeoPoint location = {}, std::string region = {}) {
  if (!(rec.annual_energy_mwh > 0.0)) throw Error("facility " + rec.facility_id + ": annual energy must be positive");
  validate(rec);
  validate(curve);
  if (rec.sector_code != curve.sector_code) {
    throw Error("facility " + rec.facility_id + " (sector " + rec.sector_code +
                ") paired with curve for sector " + curve.sector_code);
  }

  Rng rng(seed);
  const std::size_t days = operating_days(rec.annual_operating_hours);
  const std::size_t start_day = rng.below(kDaysPerYear);
  const double standby = *std::min_element(curve.per_unit.begin(), curve.per_unit.end());

  std::vector<double> v(kHoursPerYear, standby);
  for (std::size_t i = 0; i < days; ++i) {
    const std::size_t day = (start_day + i) % kDaysPerYear;
    std::copy(curve.per_unit.begin(), curve.per_unit.end(), v.begin() + static_cast<std::ptrdiff_t>(day * kHoursPerDay));
  }
  for (auto& x : v) x = std::max(0.0, x * (1.0 + kIndustrialNoiseSigma * rng.normal()));

  double total = 0.0;
  for (double x : v) total += x;
  if (!(total > 0.0)) throw Error("facility " + rec.facility_id + ": sector curve integrates to zero");
  const double scale = rec.annual_energy_mwh / total;
  for (auto& x : v) x *= scale;

  return {rec.facility_id, LoadKind::industrial, rec.sector_code, location, std::move(region),
          HourlySeries(std::move(v), rec.facility_id)};
}

/// Synthesizes every facility with a matching sector curve. Each facility draws
/// from its own stream keyed by facility id.
inline std::vector<PrototypeProfile> synthesize_industrial_corpus(
    std::span<const IndustrialFacilityRecord> facilities, std::span<const DailySectorCurve> curves,
    std::uint64_t seed) {
  std::map<std::string, const DailySectorCurve*> by_sector;
  for (const auto& c : curves) by_sector[c.sector_code] = &c;
  std::vector<PrototypeProfile> out;
  out.reserve(facilities.size());
  for (const auto& f : facilities) {
    const auto it = by_sector.find(f.sector_code);
    if (it == by_sector.end()) {
      throw Error("facility " + f.facility_id + ": no daily curve for sector " + f.sector_code);
    }
    out.push_back(synthesize_industrial_year(f, *it->second, substream_seed(seed, hash_string(f.facility_id))));
  }
  return out;
}

}  // namespace synthload
