#pragma once

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "synthload/core_types.hpp"
#include "synthload/csv.hpp"

namespace synthload {

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

/// One building, facility or feeder hourly profile with where it came from.
struct PrototypeProfile {
  std::string profile_id;
  LoadKind kind = LoadKind::residential;
  std::string subtype;  // commercial building type, SIC code, or feeder class
  GeoPoint location;
  std::string region;
  HourlySeries series;
};

struct IndustrialFacilityRecord {
  std::string facility_id;
  std::string sector_code;
  double annual_energy_mwh = 0.0;
  double annual_operating_hours = 0.0;

  friend bool operator==(const IndustrialFacilityRecord&, const IndustrialFacilityRecord&) = default;
};

/// A per-unit daily load curve for one industrial sector (peak normalized to 1).
struct DailySectorCurve {
  std::string sector_code;
  std::array<double, kHoursPerDay> per_unit{};

  friend bool operator==(const DailySectorCurve&, const DailySectorCurve&) = default;
};

struct UtilitySalesRecord {
  std::string utility_id;
  GeoPoint centroid;
  double residential_mwh = 0.0;
  double commercial_mwh = 0.0;
  double industrial_mwh = 0.0;

  friend bool operator==(const UtilitySalesRecord&, const UtilitySalesRecord&) = default;
};

/// Average daily solar output at a site, kWh/m^2/day.
struct SolarResourceRecord {
  GeoPoint location;
  double avg_output = 0.0;

  friend bool operator==(const SolarResourceRecord&, const SolarResourceRecord&) = default;
};

inline void validate(const IndustrialFacilityRecord& r) {
  if (r.facility_id.empty()) throw Error("facility id is empty");
  if (!(r.annual_energy_mwh > 0.0) || !std::isfinite(r.annual_energy_mwh)) {
    throw Error("facility " + r.facility_id + ": annual energy must be positive");
  }
  if (!(r.annual_operating_hours > 0.0 && r.annual_operating_hours <= 8760.0)) {
    throw Error("facility " + r.facility_id + ": operating hours must lie in (0, 8760]");
  }
}

inline void validate(const DailySectorCurve& c) {
  double peak = 0.0;
  for (double v : c.per_unit) {
    if (!(v >= 0.0 && v <= 1.0 + 1e-9)) {
      throw Error("sector curve " + c.sector_code + ": value outside [0, 1]");
    }
    peak = std::max(peak, v);
  }
  if (std::abs(peak - 1.0) > 1e-9) {
    throw Error("sector curve " + c.sector_code + ": peak must be normalized to 1");
  }
}

inline void validate(const UtilitySalesRecord& u) {
  const double parts[] = {u.residential_mwh, u.commercial_mwh, u.industrial_mwh};
  for (double v : parts) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error("utility " + u.utility_id + ": negative sales");
  }
  if (!(parts[0] + parts[1] + parts[2] > 0.0)) {
    throw Error("utility " + u.utility_id + ": total sales must be positive");
  }
}

inline void validate(const PrototypeProfile& p) {
  if (p.profile_id.empty()) throw Error("profile id is empty");
  if (p.kind == LoadKind::residential && p.subtype != "residential") {
    throw Error("profile " + p.profile_id + ": residential subtype must be 'residential'");
  }
  if (p.subtype.empty()) throw Error("profile " + p.profile_id + ": subtype is empty");
  make_geo_point(p.location.latitude, p.location.longitude);
}

// ---------------------------------------------------------------------------
// Bus table: bus_id,lat,lon,peak_mw,power_factor
// ---------------------------------------------------------------------------

inline constexpr std::string_view kBusHeader = "bus_id,lat,lon,peak_mw,power_factor";

inline std::vector<LoadBus> parse_bus_table(std::string_view text, std::string_view source = "buses") {
  csv::LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw Error(std::string(source) + ": empty bus table");
  csv::expect_header(line, kBusHeader, source);

  std::vector<LoadBus> buses;
  std::set<std::int64_t> seen;
  while (reader.next(line)) {
    if (csv::trim(line).empty()) continue;
    const auto ctx = csv::where(source, reader.line_no());
    const auto f = csv::split(line);
    if (f.size() != 5) throw Error(ctx + "expected 5 fields, got " + std::to_string(f.size()));
    try {
      const auto id = csv::parse_int(f[0], ctx);
      if (!seen.insert(id).second) throw Error("duplicate bus_id " + std::to_string(id));
      buses.push_back(make_load_bus(id, {csv::parse_double(f[1], ctx), csv::parse_double(f[2], ctx)},
                                    csv::parse_double(f[3], ctx), csv::parse_double(f[4], ctx)));
    } catch (const Error& e) {
      const std::string msg = e.what();
      throw Error(msg.rfind(ctx, 0) == 0 ? msg : ctx + msg);
    }
  }
  return buses;
}

inline std::string serialize_bus_table(const std::vector<LoadBus>& buses) {
  std::string out(kBusHeader);
  out += '\n';
  for (const auto& b : buses) {
    out += std::to_string(b.bus_id);
    for (double v : {b.location.latitude, b.location.longitude, b.peak_mw, b.power_factor}) {
      out += ',';
      csv::append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Profile files: one value per line, 8760 lines.
// ---------------------------------------------------------------------------

/// Hours of Feb 29 in a leap year (day 59 counted from 0).
inline constexpr std::size_t kLeapDayFirstHour = 59 * kHoursPerDay;

/// Parses a single-column profile. 8784-hour (leap year) files lose Feb 29.
inline HourlySeries parse_profile_values(std::string_view text, std::string_view source) {
  csv::LineReader reader(text);
  std::string_view line;
  std::vector<double> values;
  values.reserve(kHoursPerYear + kHoursPerDay);
  while (reader.next(line)) {
    if (csv::trim(line).empty()) continue;
    values.push_back(csv::parse_double(line, csv::where(source, reader.line_no())));
  }
  if (values.size() == kHoursPerYear + kHoursPerDay) {
    values.erase(values.begin() + kLeapDayFirstHour,
                 values.begin() + kLeapDayFirstHour + kHoursPerDay);
  }
  if (values.size() != kHoursPerYear) {
    throw Error(std::string(source) + ": profile has " + std::to_string(values.size()) +
                " values, expected 8760");
  }
  return HourlySeries(std::move(values), std::string(source));
}

inline std::string serialize_profile_values(const HourlySeries& s) {
  std::string out;
  out.reserve(kHoursPerYear * 20);
  for (double v : s.values()) {
    csv::append_double(out, v);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifest JSON: [{file, kind, subtype, lat, lon, region}, ...]
// ---------------------------------------------------------------------------

struct ManifestEntry {
  std::string file;
  LoadKind kind = LoadKind::residential;
  std::string subtype;
  GeoPoint location;
  std::string region;
};

inline std::string profile_id_for(const std::string& file) {
  return std::filesystem::path(file).stem().string();
}

inline std::vector<ManifestEntry> parse_manifest(std::string_view text, std::string_view source = "manifest") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string(source) + ": " + e.what());
  }
  if (!doc.is_array()) throw Error(std::string(source) + ": manifest must be a JSON array");
  std::vector<ManifestEntry> entries;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& j = doc[i];
    try {
      ManifestEntry e;
      e.file = j.at("file").get<std::string>();
      e.kind = parse_load_kind(j.at("kind").get<std::string>());
      e.subtype = j.at("subtype").get<std::string>();
      e.location = make_geo_point(j.at("lat").get<double>(), j.at("lon").get<double>());
      e.region = j.at("region").get<std::string>();
      entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(std::string(source) + ": entry " + std::to_string(i) + ": " + ex.what());
    } catch (const Error& ex) {
      throw Error(std::string(source) + ": entry " + std::to_string(i) + ": " + ex.what());
    }
  }
  return entries;
}

inline std::string serialize_manifest(const std::vector<ManifestEntry>& entries) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& e : entries) {
    doc.push_back({{"file", e.file},
                   {"kind", std::string(to_string(e.kind))},
                   {"subtype", e.subtype},
                   {"lat", e.location.latitude},
                   {"lon", e.location.longitude},
                   {"region", e.region}});
  }
  return doc.dump(1) + "\n";
}

/// Loads every profile listed in a manifest. Relative file paths resolve against
/// the manifest's directory.
inline std::vector<PrototypeProfile> parse_prototype_corpus(const std::filesystem::path& manifest_path,
                                                            std::vector<std::string>* warnings = nullptr) {
  const auto entries = parse_manifest(csv::read_file(manifest_path), manifest_path.string());
  if (entries.empty() && warnings) warnings->push_back(manifest_path.string() + ": manifest is empty");

  std::vector<PrototypeProfile> profiles;
  profiles.reserve(entries.size());
  std::set<std::string> ids;
  for (const auto& e : entries) {
    const auto path = std::filesystem::path(e.file).is_absolute()
                          ? std::filesystem::path(e.file)
                          : manifest_path.parent_path() / e.file;
    PrototypeProfile p{profile_id_for(e.file), e.kind, e.subtype, e.location, e.region,
                       parse_profile_values(csv::read_file(path), path.string())};
    p.series = p.series.relabeled(p.profile_id);
    validate(p);
    if (!ids.insert(p.profile_id).second) throw Error("duplicate profile id " + p.profile_id);
    profiles.push_back(std::move(p));
  }
  return profiles;
}

// ---------------------------------------------------------------------------
// Facility CSV: facility_id,sector_code,annual_energy_mwh,annual_operating_hours
// ---------------------------------------------------------------------------

inline constexpr std::string_view kFacilityHeader =
    "facility_id,sector_code,annual_energy_mwh,annual_operating_hours";

inline std::vector<IndustrialFacilityRecord> parse_facilities(std::string_view text,
                                                              std::string_view source = "facilities") {
  csv::LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw Error(std::string(source) + ": empty facility table");
  csv::expect_header(line, kFacilityHeader, source);
  std::vector<IndustrialFacilityRecord> out;
  while (reader.next(line)) {
    if (csv::trim(line).empty()) continue;
    const auto ctx = csv::where(source, reader.line_no());
    const auto f = csv::split(line);
    if (f.size() != 4) throw Error(ctx + "expected 4 fields");
    IndustrialFacilityRecord r{std::string(f[0]), std::string(f[1]), csv::parse_double(f[2], ctx),
                               csv::parse_double(f[3], ctx)};
    try {
      validate(r);
    } catch (const Error& e) {
      throw Error(ctx + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string serialize_facilities(const std::vector<IndustrialFacilityRecord>& records) {
  std::string out(kFacilityHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.facility_id + ',' + r.sector_code + ',';
    csv::append_double(out, r.annual_energy_mwh);
    out += ',';
    csv::append_double(out, r.annual_operating_hours);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sector curve CSV: sector_code,h0..h23
// ---------------------------------------------------------------------------

inline std::string sector_curve_header() {
  std::string h = "sector_code";
  for (std::size_t i = 0; i < kHoursPerDay; ++i) h += ",h" + std::to_string(i);
  return h;
}

inline std::vector<DailySectorCurve> parse_sector_curves(std::string_view text,
                                                         std::string_view source = "sector_curves") {
  csv::LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw Error(std::string(source) + ": empty sector curve table");
  csv::expect_header(line, sector_curve_header(), source);
  std::vector<DailySectorCurve> out;
  while (reader.next(line)) {
    if (csv::trim(line).empty()) continue;
    const auto ctx = csv::where(source, reader.line_no());
    const auto f = csv::split(line);
    if (f.size() != kHoursPerDay + 1) throw Error(ctx + "expected 25 fields");
    DailySectorCurve c;
    c.sector_code = std::string(f[0]);
    for (std::size_t h = 0; h < kHoursPerDay; ++h) c.per_unit[h] = csv::parse_double(f[h + 1], ctx);
    try {
      validate(c);
    } catch (const Error& e) {
      throw Error(ctx + e.what());
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::string serialize_sector_curves(const std::vector<DailySectorCurve>& curves) {
  std::string out = sector_curve_header() + '\n';
  for (const auto& c : curves) {
    out += c.sector_code;
    for (double v : c.per_unit) {
      out += ',';
      csv::append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Utility CSV: utility_id,lat,lon,res_mwh,com_mwh,ind_mwh
// ---------------------------------------------------------------------------

inline constexpr std::string_view kUtilityHeader = "utility_id,lat,lon,res_mwh,com_mwh,ind_mwh";

inline std::vector<UtilitySalesRecord> parse_utilities(std::string_view text,
                                                       std::string_view source = "utilities") {
  csv::LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw Error(std::string(source) + ": empty utility table");
  csv::expect_header(line, kUtilityHeader, source);
  std::vector<UtilitySalesRecord> out;
  while (reader.next(line)) {
    if (csv::trim(line).empty()) continue;
    const auto ctx = csv::where(source, reader.line_no());
    const auto f = csv::split(line);
    if (f.size() != 6) throw Error(ctx + "expected 6 fields");
    try {
      UtilitySalesRecord u{std::string(f[0]),
                           make_geo_point(csv::parse_double(f[1], ctx), csv::parse_double(f[2], ctx)),
                           csv::parse_double(f[3], ctx), csv::parse_double(f[4], ctx),
                           csv::parse_double(f[5], ctx)};
      validate(u);
      out.push_back(std::move(u));
    } catch (const Error& e) {
      const std::string msg = e.what();
      throw Error(msg.rfind(ctx, 0) == 0 ? msg : ctx + msg);
    }
  }
  return out;
}

inline std::string serialize_utilities(const std::vector<UtilitySalesRecord>& records) {
  std::string out(kUtilityHeader);
  out += '\n';
  for (const auto& u : records) {
    out += u.utility_id;
    for (double v : {u.centroid.latitude, u.centroid.longitude, u.residential_mwh, u.commercial_mwh,
                     u.industrial_mwh}) {
      out += ',';
      csv::append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solar resource CSV: lat,lon,avg_output
// ---------------------------------------------------------------------------

inline constexpr std::string_view kSolarHeader = "lat,lon,avg_output";

inline std::vector<SolarResourceRecord> parse_solar_resources(std::string_view text,
                                                              std::string_view source = "solar") {
  csv::LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw Error(std::string(source) + ": empty solar resource table");
  csv::expect_header(line, kSolarHeader, source);
  std::vector<SolarResourceRecord> out;
  while (reader.next(line)) {
    if (csv::trim(line).empty()) continue;
    const auto ctx = csv::where(source, reader.line_no());
    const auto f = csv::split(line);
    if (f.size() != 3) throw Error(ctx + "expected 3 fields");
    try {
      SolarResourceRecord r{make_geo_point(csv::parse_double(f[0], ctx), csv::parse_double(f[1], ctx)),
                            csv::parse_double(f[2], ctx)};
      if (!(r.avg_output >= 0.0)) throw Error("solar output must be non-negative");
      out.push_back(r);
    } catch (const Error& e) {
      const std::string msg = e.what();
      throw Error(msg.rfind(ctx, 0) == 0 ? msg : ctx + msg);
    }
  }
  return out;
}

inline std::string serialize_solar_resources(const std::vector<SolarResourceRecord>& records) {
  std::string out(kSolarHeader);
  out += '\n';
  for (const auto& r : records) {
    csv::append_double(out, r.location.latitude);
    out += ',';
    csv::append_double(out, r.location.longitude);
    out += ',';
    csv::append_double(out, r.avg_output);
    out += '\n';
  }
  return out;
}

}  // namespace synthload
