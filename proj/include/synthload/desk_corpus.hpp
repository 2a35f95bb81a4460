#pragma once

// Deterministic stand-in for the public building, facility, feeder, utility and
// solar datasets. Shapes are qualitative: residential winter days carry a morning
// and an evening peak, summer days a single afternoon peak; commercial types
// differ in opening hours and weekend behaviour; industrial sectors differ in
// their daily base load.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "synthload/core_types.hpp"
#include "synthload/ingest.hpp"
#include "synthload/rng.hpp"

namespace synthload::desk {

struct CommercialType {
  const char* name;
  double scale;          // peak size in corpus units
  double open_hour;      // occupancy ramps up around here
  double close_hour;     // and down around here
  double weekend_factor; // occupied-load multiplier on Saturday/Sunday
  double base_fraction;  // unoccupied load as a fraction of peak
  double cooling_gain;   // summer uplift
};

/// The 16 commercial reference building types.
inline constexpr std::array<CommercialType, 16> kCommercialTypes = {{
    {"FullServiceRestaurant", 1.6, 10.0, 23.0, 1.15, 0.30, 0.15},
    {"Hospital", 9.0, 0.0, 24.0, 1.00, 0.70, 0.20},
    {"LargeHotel", 6.0, 6.0, 24.0, 1.05, 0.55, 0.20},
    {"LargeOffice", 9.5, 7.0, 19.0, 0.25, 0.35, 0.15},
    {"MediumOffice", 4.0, 7.0, 19.0, 0.25, 0.30, 0.18},
    {"MidriseApartment", 2.2, 6.0, 23.0, 1.00, 0.45, 0.25},
    {"OutPatient", 3.0, 7.0, 20.0, 0.40, 0.40, 0.15},
    {"PrimarySchool", 3.2, 7.0, 16.0, 0.10, 0.25, 0.05},
    {"QuickServiceRestaurant", 0.9, 6.0, 23.0, 1.10, 0.35, 0.12},
    {"SecondarySchool", 5.5, 7.0, 17.0, 0.12, 0.25, 0.05},
    {"SmallHotel", 1.8, 6.0, 24.0, 1.05, 0.50, 0.20},
    {"SmallOffice", 0.8, 8.0, 18.0, 0.15, 0.25, 0.18},
    {"StandaloneRetail", 1.5, 9.0, 21.0, 0.90, 0.30, 0.18},
    {"StripMall", 1.4, 9.0, 21.0, 0.85, 0.30, 0.18},
    {"SuperMarket", 3.5, 6.0, 23.0, 1.00, 0.60, 0.10},
    {"Warehouse", 1.2, 7.0, 17.0, 0.20, 0.30, 0.05},
}};

struct SectorShape {
  const char* sic;
  double base;        // off-shift level before normalization
  double shift_start; // main shift start hour
  double shift_end;   // main shift end hour
};

inline constexpr std::array<SectorShape, 8> kSectorShapes = {{
    {"20", 0.75, 6.0, 22.0},   // food
    {"26", 0.88, 7.0, 19.0},   // pulp and paper mills
    {"28", 0.90, 7.0, 19.0},   // chemicals
    {"29", 0.93, 8.0, 18.0},   // petroleum refining
    {"32", 0.60, 7.0, 19.0},   // stone, clay, glass
    {"33", 0.85, 6.0, 22.0},   // primary metal
    {"36", 0.50, 7.0, 17.0},   // electronic equipment
    {"37", 0.45, 6.0, 23.0},   // transportation equipment
}};

struct Options {
  std::uint64_t seed = 42;
  int n_locations = 3;
  std::vector<std::string> regions = {"west", "central", "east"};
  int n_buses = 50;
  double system_peak_mw = 132500.0;
  int feeders_per_region = 12;
  int n_facilities = 40;
  int utilities_per_location = 2;
};

struct Corpus {
  std::vector<PrototypeProfile> profiles;  // residential, commercial, feeder
  std::vector<IndustrialFacilityRecord> facilities;
  std::vector<DailySectorCurve> sector_curves;
  std::vector<UtilitySalesRecord> utilities;
  std::vector<SolarResourceRecord> solar;
  std::vector<LoadBus> buses;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLatMin = 26.0, kLatMax = 48.0;
inline constexpr double kLonMin = -123.0, kLonMax = -70.0;

inline double seasonal_window(std::size_t day, double center, double half_width) {
  double d = std::abs(static_cast<double>(day) - center);
  d = std::min(d, 365.0 - d);
  return d < half_width ? std::cos(0.5 * kPi * d / half_width) : 0.0;
}

/// Heating season weight: 1 in mid-January, 0 from April through October.
inline double winter_weight(std::size_t day) { return seasonal_window(day, 15.0, 75.0); }

/// Cooling season weight: 1 in mid-July, disjoint from the heating season.
inline double summer_weight(std::size_t day) { return seasonal_window(day, 196.0, 70.0); }

inline double circular_bump(double hour, double center, double width) {
  double d = std::abs(hour - center);
  d = std::min(d, 24.0 - d);
  return std::exp(-0.5 * (d / width) * (d / width));
}

/// Noise-free residential shape (per unit) at an hour of the year.
inline double residential_template(const GeoPoint& where, std::size_t hour_of_year) {
  const std::size_t day = hour_of_year / kHoursPerDay;
  const double h = static_cast<double>(hour_of_year % kHoursPerDay);
  const double cold = std::clamp((where.latitude - kLatMin) / (kLatMax - kLatMin), 0.0, 1.0);
  const double heat_amp = 0.3 + 1.0 * cold;
  const double cool_amp = 0.3 + 1.1 * (1.0 - cold);
  const double ww = winter_weight(day);
  const double sw = summer_weight(day);

  const double morning = circular_bump(h, 7.5, 1.8);
  const double evening = circular_bump(h, 19.0, 3.0);
  const double afternoon = circular_bump(h, 16.5, 3.6);

  // Smooth diurnal swing under the activity peaks: lowest before dawn.
  double v = 0.35 + 0.12 * (1.0 + std::cos(2.0 * kPi * (h - 17.0) / 24.0));
  v += (0.25 + heat_amp * ww) * (1.0 - sw) * morning;
  v += (0.35 + heat_amp * ww) * evening;
  v += cool_amp * sw * afternoon;
  return v;
}

/// Noise-free commercial shape (per unit of the type's scale).
inline double commercial_template(const CommercialType& type, std::size_t hour_of_year) {
  const std::size_t day = hour_of_year / kHoursPerDay;
  const double h = static_cast<double>(hour_of_year % kHoursPerDay) + 0.5;
  // Day 0 is a Monday.
  const bool weekend = (day % 7) >= 5;
  double occupancy = 1.0;
  if (!(type.open_hour <= 0.0 && type.close_hour >= 24.0)) {
    const double up = 1.0 / (1.0 + std::exp(-(h - type.open_hour) * 0.8));
    const double down = 1.0 / (1.0 + std::exp((h - type.close_hour) * 0.8));
    occupancy = up * down;
  }
  if (weekend) occupancy *= type.weekend_factor;
  const double seasonal = 1.0 + type.cooling_gain * summer_weight(day) + 0.05 * winter_weight(day);
  return (type.base_fraction + (1.0 - type.base_fraction) * occupancy) * seasonal;
}

/// Feeder shape: a diversified residential/commercial mix over a high base load.
inline double feeder_template(double commercial_share, const GeoPoint& where, std::size_t hour_of_year) {
  const double res = residential_template(where, hour_of_year);
  const double com = commercial_template(kCommercialTypes[4], hour_of_year);
  return 0.9 + (1.0 - commercial_share) * 0.6 * res + commercial_share * 0.6 * com;
}

inline DailySectorCurve sector_curve(const SectorShape& s) {
  DailySectorCurve c;
  c.sector_code = s.sic;
  double peak = 0.0;
  for (std::size_t h = 0; h < kHoursPerDay; ++h) {
    const double x = static_cast<double>(h) + 0.5;
    const double up = 1.0 / (1.0 + std::exp(-(x - s.shift_start) * 1.5));
    const double down = 1.0 / (1.0 + std::exp((x - s.shift_end) * 1.5));
    c.per_unit[h] = s.base + (1.0 - s.base) * up * down;
    peak = std::max(peak, c.per_unit[h]);
  }
  for (auto& v : c.per_unit) v /= peak;
  // Division leaves the argmax at exactly 1 only up to rounding; pin it.
  *std::max_element(c.per_unit.begin(), c.per_unit.end()) = 1.0;
  return c;
}

inline std::string padded(int i, int width = 3) {
  std::string s = std::to_string(i);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

inline std::string region_for_longitude(const std::vector<std::string>& regions, double lon) {
  const double band = (kLonMax - kLonMin) / static_cast<double>(regions.size());
  auto idx = static_cast<std::size_t>(std::max(0.0, (lon - kLonMin) / band));
  return regions[std::min(idx, regions.size() - 1)];
}

inline HourlySeries noisy_series(Rng& rng, double scale, const auto& shape, std::string label) {
  std::vector<double> v(kHoursPerYear);
  for (std::size_t d = 0; d < kDaysPerYear; ++d) {
    const double day_factor = 1.0 + 0.06 * rng.normal();
    for (std::size_t h = 0; h < kHoursPerDay; ++h) {
      const std::size_t t = d * kHoursPerDay + h;
      v[t] = std::max(0.0, scale * shape(t) * day_factor * (1.0 + 0.04 * rng.normal()));
    }
  }
  return HourlySeries(std::move(v), std::move(label));
}

/// Deterministic desk-scale corpus. Profile magnitudes are expressed in units of
/// the average bus peak so that each bus aggregates a few hundred prototypes
/// whatever the configured system size.
inline Corpus generate_corpus(const Options& opt) {
  if (opt.n_locations < 1) throw Error("n_locations must be at least 1");
  if (opt.regions.empty()) throw Error("at least one region tag is required");
  if (opt.n_buses < 0 || opt.feeders_per_region < 1 || opt.n_facilities < 0 ||
      opt.utilities_per_location < 1) {
    throw Error("invalid desk corpus counts");
  }
  if (!(opt.system_peak_mw > 0.0)) throw Error("system peak must be positive");

  Corpus corpus;
  const double avg_bus_peak =
      opt.system_peak_mw / static_cast<double>(std::max(opt.n_buses, 1));
  const double unit = avg_bus_peak / 400.0;

  auto stream = [&](std::uint64_t tag, std::uint64_t index) {
    return Rng(substream_seed(opt.seed, substream_seed(tag, index)));
  };
  auto random_point = [](Rng& rng, double lon_lo, double lon_hi) {
    const double lat = kLatMin + (kLatMax - kLatMin) * rng.uniform();
    const double lon = lon_lo + (lon_hi - lon_lo) * rng.uniform();
    return GeoPoint{lat, lon};
  };

  // Weather sites with one residential and 16 commercial profiles each.
  for (int loc = 0; loc < opt.n_locations; ++loc) {
    Rng rng = stream(1, static_cast<std::uint64_t>(loc));
    const GeoPoint where = random_point(rng, kLonMin, kLonMax);
    const std::string region = region_for_longitude(opt.regions, where.longitude);

    const std::string res_id = "res_" + padded(loc);
    const double house = unit * (0.8 + 0.4 * rng.uniform());
    corpus.profiles.push_back(
        {res_id, LoadKind::residential, "residential", where, region,
         noisy_series(rng, house, [&](std::size_t t) { return residential_template(where, t); }, res_id)});

    for (const auto& type : kCommercialTypes) {
      const std::string id = "com_" + padded(loc) + "_" + type.name;
      const double size = unit * type.scale * (0.9 + 0.2 * rng.uniform());
      corpus.profiles.push_back(
          {id, LoadKind::commercial, type.name, where, region,
           noisy_series(rng, size, [&](std::size_t t) { return commercial_template(type, t); }, id)});
    }

    SolarResourceRecord solar;
    solar.location = where;
    const double south = 1.0 - (where.latitude - kLatMin) / (kLatMax - kLatMin);
    const double west = std::clamp((-95.0 - where.longitude) / 28.0, 0.0, 1.0);
    solar.avg_output = 3.4 + 1.6 * south + 1.2 * west + 0.2 * rng.uniform();
    corpus.solar.push_back(solar);
  }

  // Taxonomy-style feeders per region.
  const double band = (kLonMax - kLonMin) / static_cast<double>(opt.regions.size());
  for (std::size_t r = 0; r < opt.regions.size(); ++r) {
    for (int k = 0; k < opt.feeders_per_region; ++k) {
      Rng rng = stream(2, r * 1000 + static_cast<std::uint64_t>(k));
      const double lo = kLonMin + band * static_cast<double>(r);
      const GeoPoint where = random_point(rng, lo, lo + band);
      const double com_share = 0.2 + 0.6 * rng.uniform();
      const double size = avg_bus_peak * (0.12 + 0.3 * rng.uniform()) / 2.2;
      const std::string id = "feeder_" + opt.regions[r] + "_" + padded(k, 2);
      const std::string cls = com_share > 0.5 ? "commercial_mix" : "residential_mix";
      corpus.profiles.push_back(
          {id, LoadKind::feeder, cls, where, opt.regions[r],
           noisy_series(rng, size,
                        [&](std::size_t t) { return feeder_template(com_share, where, t); }, id)});
    }
  }

  for (const auto& s : kSectorShapes) corpus.sector_curves.push_back(sector_curve(s));

  for (int i = 0; i < opt.n_facilities; ++i) {
    Rng rng = stream(3, static_cast<std::uint64_t>(i));
    const auto& curve = corpus.sector_curves[rng.below(corpus.sector_curves.size())];
    const double hours = std::round(2000.0 + 6760.0 * rng.uniform());
    const double peak = avg_bus_peak * 0.004 * std::exp(2.5 * rng.uniform());
    double curve_mean = 0.0;
    for (double v : curve.per_unit) curve_mean += v / static_cast<double>(kHoursPerDay);
    IndustrialFacilityRecord rec{"fac_" + padded(i, 4), curve.sector_code,
                                 peak * curve_mean * hours, hours};
    corpus.facilities.push_back(rec);
  }

  const int n_utilities = opt.n_locations * opt.utilities_per_location;
  for (int i = 0; i < n_utilities; ++i) {
    Rng rng = stream(4, static_cast<std::uint64_t>(i));
    UtilitySalesRecord u;
    u.utility_id = "U" + padded(i, 4);
    u.centroid = random_point(rng, kLonMin, kLonMax);
    const double total = 1.0e6 * (0.5 + rng.uniform());
    double res = 0.30 + 0.35 * rng.uniform();
    double com = 0.20 + 0.25 * rng.uniform();
    double ind = 0.05 + 0.30 * rng.uniform();
    const double sum = res + com + ind;
    u.residential_mwh = std::round(total * res / sum);
    u.commercial_mwh = std::round(total * com / sum);
    u.industrial_mwh = std::round(total * ind / sum);
    corpus.utilities.push_back(u);
  }

  // Bus table: log-normal sizes rescaled so the peaks sum to the system peak.
  if (opt.n_buses > 0) {
    std::vector<double> raw;
    std::vector<GeoPoint> where;
    for (int i = 0; i < opt.n_buses; ++i) {
      Rng rng = stream(5, static_cast<std::uint64_t>(i));
      where.push_back(random_point(rng, kLonMin, kLonMax));
      raw.push_back(std::exp(0.5 * rng.normal()));
    }
    double raw_sum = 0.0;
    for (double r : raw) raw_sum += r;
    for (int i = 0; i < opt.n_buses; ++i) {
      const double peak = std::round(opt.system_peak_mw * raw[static_cast<std::size_t>(i)] / raw_sum * 1000.0) / 1000.0;
      corpus.buses.push_back(make_load_bus(1001 + i, where[static_cast<std::size_t>(i)],
                                           std::max(peak, 0.001), 0.95));
    }
  }
  return corpus;
}

}  // namespace synthload::desk
