#pragma once

#include <array>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "synthload/core_types.hpp"
#include "synthload/ingest.hpp"

namespace synthload {

/// Utility whose centroid is nearest the bus (great-circle). Ties go to the
/// lexicographically smallest utility id, so the result does not depend on the
/// order of `utilities`.
inline const UtilitySalesRecord& assign_utility(const LoadBus& bus,
                                                std::span<const UtilitySalesRecord> utilities) {
  if (utilities.empty()) throw Error("no utilities to assign bus " + std::to_string(bus.bus_id));
  const UtilitySalesRecord* best = nullptr;
  double best_km = 0.0;
  for (const auto& u : utilities) {
    const double km = great_circle_km(bus.location, u.centroid);
    if (!best || std::tie(km, u.utility_id) < std::tie(best_km, best->utility_id)) {
      best = &u;
      best_km = km;
    }
  }
  return *best;
}

/// Sales-share composition of a utility.
inline CompositionRatio composition_ratio(const UtilitySalesRecord& u) {
  const double total = u.residential_mwh + u.commercial_mwh + u.industrial_mwh;
  if (!(total > 0.0)) throw Error("utility " + u.utility_id + " has no sales");
  CompositionRatio r{u.residential_mwh / total, u.commercial_mwh / total, u.industrial_mwh / total};
  // Put the rounding residue on the largest share so the sum is 1 to the last ulp.
  const double residue = 1.0 - (r.residential + r.commercial + r.industrial);
  if (r.residential >= r.commercial && r.residential >= r.industrial) {
    r.residential += residue;
  } else if (r.commercial >= r.industrial) {
    r.commercial += residue;
  } else {
    r.industrial += residue;
  }
  return make_composition_ratio(std::clamp(r.residential, 0.0, 1.0), std::clamp(r.commercial, 0.0, 1.0),
                                std::clamp(r.industrial, 0.0, 1.0));
}

/// Largest share wins; ties resolve residential > commercial > industrial.
inline LoadType dominant_type(const CompositionRatio& r) {
  if (r.residential >= r.commercial && r.residential >= r.industrial) return LoadType::residential;
  if (r.commercial >= r.industrial) return LoadType::commercial;
  return LoadType::industrial;
}

/// Percentage of buses dominated by each type, indexed by LoadType.
using DominanceCensus = std::array<double, 3>;

inline DominanceCensus dominant_type_census(std::span<const CompositionRatio> ratios) {
  if (ratios.empty()) throw Error("dominance census needs at least one bus");
  std::array<std::size_t, 3> counts{};
  for (const auto& r : ratios) ++counts[static_cast<std::size_t>(dominant_type(r))];
  DominanceCensus pct{};
  for (std::size_t i = 0; i < 3; ++i) {
    pct[i] = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(ratios.size());
  }
  return pct;
}

}  // namespace synthload
