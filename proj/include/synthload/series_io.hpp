#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "synthload/core_types.hpp"
#include "synthload/csv.hpp"

namespace synthload {

/// Long-format series table: one (bus_id, hour, value) row per line.
/// Rows are grouped by bus id.
struct LongSeriesTable {
  std::string value_column = "p_mw";
  std::map<std::int64_t, std::vector<std::pair<std::size_t, double>>> rows;

  /// Dense 8760-hour series for one bus; every hour must be present exactly once.
  [[nodiscard]] HourlySeries hourly(std::int64_t bus_id) const {
    const auto it = rows.find(bus_id);
    if (it == rows.end()) throw Error("no rows for bus " + std::to_string(bus_id));
    std::vector<double> v(kHoursPerYear, 0.0);
    std::vector<bool> seen(kHoursPerYear, false);
    for (const auto& [hour, value] : it->second) {
      if (hour >= kHoursPerYear) throw Error("bus " + std::to_string(bus_id) + ": hour out of range");
      if (seen[hour]) throw Error("bus " + std::to_string(bus_id) + ": duplicate hour " + std::to_string(hour));
      seen[hour] = true;
      v[hour] = value;
    }
    if (it->second.size() != kHoursPerYear) {
      throw Error("bus " + std::to_string(bus_id) + " has " + std::to_string(it->second.size()) +
                  " hours, expected 8760");
    }
    return HourlySeries(std::move(v), "bus_" + std::to_string(bus_id));
  }

  [[nodiscard]] std::vector<std::int64_t> bus_ids() const {
    std::vector<std::int64_t> ids;
    for (const auto& [id, _] : rows) ids.push_back(id);
    return ids;
  }
};

inline LongSeriesTable parse_long_series(std::string_view text, std::string_view source = "series",
                                         std::string_view value_column = "p_mw") {
  csv::LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw Error(std::string(source) + ": empty series file");
  csv::expect_header(line, "bus_id,hour," + std::string(value_column), source);
  LongSeriesTable table;
  table.value_column = std::string(value_column);
  while (reader.next(line)) {
    if (csv::trim(line).empty()) continue;
    const auto ctx = csv::where(source, reader.line_no());
    const auto f = csv::split(line);
    if (f.size() != 3) throw Error(ctx + "expected 3 fields");
    const auto bus = csv::parse_int(f[0], ctx);
    const auto hour = csv::parse_int(f[1], ctx);
    if (hour < 0) throw Error(ctx + "negative hour");
    const double value = csv::parse_double(f[2], ctx);
    if (!std::isfinite(value)) throw Error(ctx + "non-finite value");
    table.rows[bus].emplace_back(static_cast<std::size_t>(hour), value);
  }
  return table;
}

/// Rows for each (bus_id, values, first_hour) block, in the given order.
struct SeriesBlock {
  std::int64_t bus_id = 0;
  std::span<const double> values;
  std::size_t first_hour = 0;
};

inline std::string serialize_long_series(std::span<const SeriesBlock> blocks, std::string_view value_column = "p_mw") {
  std::string out = "bus_id,hour," + std::string(value_column) + "\n";
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.values.size();
  out.reserve(out.size() + total * 28);
  for (const auto& b : blocks) {
    const std::string prefix = std::to_string(b.bus_id) + ",";
    for (std::size_t i = 0; i < b.values.size(); ++i) {
      out += prefix;
      out += std::to_string(b.first_hour + i);
      out += ',';
      csv::append_double(out, b.values[i]);
      out += '\n';
    }
  }
  return out;
}

/// Reactive power at a fixed power factor: q = p tan(arccos(pf)).
inline double reactive_mvar(double p_mw, double power_factor) {
  return p_mw * std::tan(std::acos(power_factor));
}

}  // namespace synthload
