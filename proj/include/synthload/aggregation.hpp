#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "synthload/core_types.hpp"
#include "synthload/ingest.hpp"
#include "synthload/prototypes.hpp"
#include "synthload/rng.hpp"

namespace synthload {

/// Per-type randomization settings for the aggregation loop.
struct AggregationConfig {
  std::array<double, 3> sigma_shift{0.4, 0.3, 0.1};           // hours, indexed by LoadType
  std::array<std::size_t, 3> permutation_pairs{100, 100, 50};  // hour pairs swapped per draw
  double noise_sigma_frac = 0.02;
  std::uint64_t master_seed = 0;
  std::size_t max_draws = 1'000'000;  // per component; guards against near-zero profiles

  void validate() const {
    for (double s : sigma_shift) {
      if (!(s > 0.0)) throw Error("time-shift sigma must be positive");
    }
    for (std::size_t n : permutation_pairs) {
      if (2 * n > kHoursPerYear) throw Error("too many permutation pairs");
    }
    if (!(noise_sigma_frac >= 0.0)) throw Error("noise sigma must be non-negative");
  }
};

// ---------------------------------------------------------------------------
// Sampling primitives
// ---------------------------------------------------------------------------

/// Selection probability of each pool member, proportional to 1/sqrt(mean), so
/// that smaller buildings are drawn more often.
inline std::vector<double> selection_weights(std::span<const double> means) {
  if (means.empty()) throw Error("selection pool is empty");
  std::vector<double> w(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (!(means[i] > 0.0) || !std::isfinite(means[i])) {
      throw Error("selection requires positive means (entry " + std::to_string(i) + ")");
    }
    w[i] = 1.0 / std::sqrt(means[i]);
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

/// Index drawn from a probability vector (inverse CDF).
inline std::size_t sample_index(std::span<const double> probabilities, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  return probabilities.size() - 1;
}

/// Integer hour shift with P(x) = Phi((x + 0.5)/sigma) - Phi((x - 0.5)/sigma),
/// i.e. a zero-mean normal rounded to the nearest hour.
inline std::int64_t sample_time_shift(double sigma, Rng& rng) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error("time-shift sigma must be positive");
  return static_cast<std::int64_t>(std::llround(sigma * rng.normal()));
}

namespace detail {

inline void swap_pairs_inplace(std::span<double> v, std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  for (const auto& [a, b] : pairs) std::swap(v[a], v[b]);
}

/// Draws 2n distinct hours uniformly without replacement; consecutive draws form
/// the pairs. `marks` is scratch space of 8760 zeros and is left zeroed.
inline std::vector<std::pair<std::size_t, std::size_t>> draw_hour_pairs(std::size_t n_pairs, Rng& rng,
                                                                        std::vector<std::uint8_t>& marks) {
  if (2 * n_pairs > kHoursPerYear) throw Error("cannot draw more than 4380 disjoint hour pairs");
  std::vector<std::size_t> picked;
  picked.reserve(2 * n_pairs);
  if (2 * n_pairs > kHoursPerYear / 2) {
    // Dense request: partial Fisher-Yates.
    std::vector<std::size_t> idx(kHoursPerYear);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < 2 * n_pairs; ++i) {
      std::swap(idx[i], idx[i + rng.below(kHoursPerYear - i)]);
      picked.push_back(idx[i]);
    }
  } else {
    while (picked.size() < 2 * n_pairs) {
      const std::size_t h = rng.below(kHoursPerYear);
      if (marks[h]) continue;
      marks[h] = 1;
      picked.push_back(h);
    }
    for (std::size_t h : picked) marks[h] = 0;
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs(n_pairs);
  for (std::size_t i = 0; i < n_pairs; ++i) pairs[i] = {picked[2 * i], picked[2 * i + 1]};
  return pairs;
}

inline void add_noise_inplace(std::span<double> v, double sigma_frac, Rng& rng) {
  if (sigma_frac == 0.0) return;
  for (auto& x : v) x = std::max(0.0, x * (1.0 + sigma_frac * rng.normal()));
}

}  // namespace detail

/// Swaps the values at each given pair of hours.
inline HourlySeries swap_hour_pairs(const HourlySeries& s,
                                    std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  std::vector<double> v = s.vector();
  for (const auto& [a, b] : pairs) {
    if (a >= kHoursPerYear || b >= kHoursPerYear) throw Error("hour index out of range");
  }
  detail::swap_pairs_inplace(v, pairs);
  return HourlySeries(std::move(v), s.label());
}

/// Swaps values within `n_pairs` disjoint random hour pairs.
inline HourlySeries permute_hour_pairs(const HourlySeries& s, std::size_t n_pairs, Rng& rng) {
  std::vector<std::uint8_t> marks(kHoursPerYear, 0);
  const auto pairs = detail::draw_hour_pairs(n_pairs, rng, marks);
  return swap_hour_pairs(s, pairs);
}

/// out[t] = max(0, s[t] (1 + e_t)), e_t ~ N(0, sigma_frac^2) i.i.d.
inline HourlySeries add_noise(const HourlySeries& s, double sigma_frac, Rng& rng) {
  if (!(sigma_frac >= 0.0)) throw Error("noise sigma must be non-negative");
  std::vector<double> v = s.vector();
  detail::add_noise_inplace(v, sigma_frac, rng);
  return HourlySeries(std::move(v), s.label());
}

// ---------------------------------------------------------------------------
// Component aggregation
// ---------------------------------------------------------------------------

struct ComponentAggregate {
  HourlySeries series;
  std::size_t draws = 0;
};

/// Accumulates randomly drawn, shifted, permuted and noised pool profiles until
/// the running sum first reaches `target_peak`.
inline ComponentAggregate aggregate_component(double target_peak, const ProfilePool& pool, double sigma_shift,
                                              std::size_t n_pairs, double noise_sigma_frac, Rng& rng,
                                              std::size_t max_draws = 1'000'000) {
  if (!(target_peak >= 0.0) || !std::isfinite(target_peak)) throw Error("target peak must be non-negative");
  if (target_peak == 0.0) return {HourlySeries{}, 0};
  if (pool.empty()) throw Error("empty prototype pool for a positive target peak");

  std::vector<double> means;
  means.reserve(pool.size());
  for (const auto* p : pool) means.push_back(series_mean(p->series));
  const auto probabilities = selection_weights(means);

  std::vector<double> acc(kHoursPerYear, 0.0);
  std::vector<double> work(kHoursPerYear);
  std::vector<std::uint8_t> marks(kHoursPerYear, 0);
  const auto n = static_cast<std::int64_t>(kHoursPerYear);

  std::size_t draws = 0;
  double peak = 0.0;
  while (peak < target_peak) {
    if (++draws > max_draws) {
      throw Error("aggregation did not reach target peak " + std::to_string(target_peak) + " within " +
                  std::to_string(max_draws) + " draws");
    }
    const auto& src = pool[sample_index(probabilities, rng)]->series.vector();
    const std::int64_t shift = sample_time_shift(sigma_shift, rng);
    const auto offset = static_cast<std::ptrdiff_t>(((shift % n) + n) % n);
    std::rotate_copy(src.begin(), src.end() - offset, src.end(), work.begin());
    const auto pairs = detail::draw_hour_pairs(n_pairs, rng, marks);
    detail::swap_pairs_inplace(work, pairs);
    detail::add_noise_inplace(work, noise_sigma_frac, rng);
    for (std::size_t t = 0; t < kHoursPerYear; ++t) {
      acc[t] += work[t];
      peak = std::max(peak, acc[t]);
    }
  }
  return {HourlySeries(std::move(acc)), draws};
}

// ---------------------------------------------------------------------------
// Load-factor correction against feeder references
// ---------------------------------------------------------------------------

/// Feeders sharing a region with the bus. The bus takes the region of its
/// nearest feeder (ties by feeder id).
inline ProfilePool feeders_for_bus(const LoadBus& bus, std::span<const PrototypeProfile> corpus) {
  const PrototypeProfile* nearest = nullptr;
  double nearest_km = 0.0;
  for (const auto& p : corpus) {
    if (p.kind != LoadKind::feeder) continue;
    const double km = great_circle_km(bus.location, p.location);
    if (!nearest || std::tie(km, p.profile_id) < std::tie(nearest_km, nearest->profile_id)) {
      nearest = &p;
      nearest_km = km;
    }
  }
  if (!nearest) throw Error("no feeder profiles for bus " + std::to_string(bus.bus_id));
  ProfilePool pool;
  for (const auto& p : corpus) {
    if (p.kind == LoadKind::feeder && p.region == nearest->region) pool.push_back(&p);
  }
  std::sort(pool.begin(), pool.end(),
            [](const PrototypeProfile* a, const PrototypeProfile* b) { return a->profile_id < b->profile_id; });
  return pool;
}

struct FeederReference {
  double load_factor = 1.0;
  std::vector<std::string> feeder_ids;
};

/// Sums feeders drawn uniformly without replacement until their summed peaks
/// reach the bus peak (or the region runs out) and returns the sum's load factor.
inline FeederReference feeder_reference_lf(const LoadBus& bus, const ProfilePool& region_feeders, Rng& rng) {
  if (region_feeders.empty()) throw Error("no feeders in region of bus " + std::to_string(bus.bus_id));
  std::vector<const PrototypeProfile*> order(region_feeders.begin(), region_feeders.end());
  std::vector<double> sum(kHoursPerYear, 0.0);
  FeederReference ref;
  double peak_sum = 0.0;
  for (std::size_t i = 0; i < order.size() && peak_sum < bus.peak_mw; ++i) {
    std::swap(order[i], order[i + rng.below(order.size() - i)]);
    const auto* f = order[i];
    const auto v = f->series.values();
    for (std::size_t t = 0; t < kHoursPerYear; ++t) sum[t] += v[t];
    peak_sum += f->series.max();
    ref.feeder_ids.push_back(f->profile_id);
  }
  ref.load_factor = load_factor_of(sum);
  return ref;
}

struct LfConstant {
  double value = 0.0;
  bool clamped = false;
};

/// Solves (C + avg) / (C + max) = reference for C, clamped at zero.
inline LfConstant solve_lf_constant(double avg, double max, double reference_lf) {
  if (!(reference_lf < 1.0)) throw Error("reference load factor must be below 1");
  if (!(reference_lf > 0.0)) throw Error("reference load factor must be positive");
  if (!(avg > 0.0 && avg <= max)) throw Error("lf constant requires 0 < avg <= max");
  const double c = (reference_lf * max - avg) / (1.0 - reference_lf);
  if (c < 0.0) return {0.0, true};
  return {c, false};
}

inline double lf_constant(double avg, double max, double reference_lf) {
  return solve_lf_constant(avg, max, reference_lf).value;
}

// ---------------------------------------------------------------------------
// Bus synthesis
// ---------------------------------------------------------------------------

struct BusPools {
  ProfilePool residential;
  ProfilePool commercial;
  ProfilePool industrial;

  [[nodiscard]] const ProfilePool& operator[](LoadType t) const {
    switch (t) {
      case LoadType::residential: return residential;
      case LoadType::commercial: return commercial;
      case LoadType::industrial: return industrial;
    }
    return residential;
  }
};

struct BusSynthesisResult {
  std::int64_t bus_id = 0;
  HourlySeries series;
  std::array<HourlySeries, 3> component_series;  // unscaled, indexed by LoadType
  std::array<std::size_t, 3> draws{};
  double reference_load_factor = 1.0;
  std::vector<std::string> reference_feeders;
  double lf_constant = 0.0;  // MW, added before the final rescale
  bool lf_constant_clamped = false;
  double final_scale = 1.0;
};

/// Per-bus random stream, independent of processing order.
inline Rng bus_rng(std::uint64_t master_seed, std::int64_t bus_id) {
  return Rng(substream_seed(master_seed, static_cast<std::uint64_t>(bus_id)));
}

/// Full bus pipeline: component aggregation to peak x ratio, load-factor
/// correction toward the feeder reference, then a multiplicative rescale so the
/// series peaks at exactly the bus size.
inline BusSynthesisResult build_bus_series(const LoadBus& bus, const CompositionRatio& ratio, const BusPools& pools,
                                           const AggregationConfig& config, const ProfilePool& feeders) {
  config.validate();
  if (!(bus.peak_mw > 0.0)) throw Error("bus " + std::to_string(bus.bus_id) + " has zero peak");
  Rng rng = bus_rng(config.master_seed, bus.bus_id);

  BusSynthesisResult out;
  out.bus_id = bus.bus_id;
  std::vector<double> total(kHoursPerYear, 0.0);
  for (LoadType type : kLoadTypes) {
    const auto i = static_cast<std::size_t>(type);
    auto agg = aggregate_component(bus.peak_mw * ratio[type], pools[type], config.sigma_shift[i],
                                   config.permutation_pairs[i], config.noise_sigma_frac, rng, config.max_draws);
    const auto v = agg.series.values();
    for (std::size_t t = 0; t < kHoursPerYear; ++t) total[t] += v[t];
    out.draws[i] = agg.draws;
    out.component_series[i] = std::move(agg.series);
  }

  const auto ref = feeder_reference_lf(bus, feeders, rng);
  out.reference_load_factor = ref.load_factor;
  out.reference_feeders = ref.feeder_ids;

  const double avg = mean_of(total);
  const double max = *std::max_element(total.begin(), total.end());
  if (!(max > 0.0)) throw Error("bus " + std::to_string(bus.bus_id) + ": aggregated load is zero");
  const auto c = solve_lf_constant(avg, max, ref.load_factor);
  out.lf_constant = c.value;
  out.lf_constant_clamped = c.clamped;

  out.final_scale = bus.peak_mw / (max + c.value);
  for (auto& x : total) x = (x + c.value) * out.final_scale;
  out.series = HourlySeries(std::move(total), "bus_" + std::to_string(bus.bus_id));
  return out;
}

}  // namespace synthload
