#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "synthload/aggregation.hpp"
#include "synthload/composition.hpp"
#include "synthload/ingest.hpp"
#include "synthload/prototypes.hpp"

namespace synthload {

struct SynthesisInputs {
  std::vector<LoadBus> buses;
  std::vector<PrototypeProfile> profiles;    // residential, commercial, feeder
  std::vector<PrototypeProfile> industrial;  // synthesized facility years
  std::vector<UtilitySalesRecord> utilities;
};

struct BusOutcome {
  LoadBus bus;
  std::string utility_id;
  CompositionRatio ratio;
  BusSynthesisResult result;
};

struct SynthesisOutput {
  std::vector<BusOutcome> buses;  // ascending bus_id
  std::vector<std::string> warnings;
};

/// Synthesizes one bus end to end: utility, composition, pools, aggregation.
inline BusOutcome synthesize_bus(const LoadBus& bus, const SynthesisInputs& in, const AggregationConfig& config,
                                 std::vector<std::string>* warnings = nullptr) {
  BusOutcome out;
  out.bus = bus;
  const auto& utility = assign_utility(bus, in.utilities);
  out.utility_id = utility.utility_id;
  out.ratio = composition_ratio(utility);

  BusPools pools;
  if (out.ratio.residential > 0.0) pools.residential = residential_pool(bus, in.profiles);
  if (out.ratio.commercial > 0.0) pools.commercial = commercial_pool(bus, in.profiles, warnings);
  pools.industrial = industrial_pool(bus.peak_mw * out.ratio.industrial, in.industrial);

  out.result = build_bus_series(bus, out.ratio, pools, config, feeders_for_bus(bus, in.profiles));
  return out;
}

/// Runs every bus on `threads` workers. Each bus draws from its own stream, so
/// the output is identical for any thread count.
inline SynthesisOutput synthesize_system(const SynthesisInputs& in, const AggregationConfig& config,
                                         unsigned threads = 1) {
  config.validate();
  std::vector<LoadBus> buses = in.buses;
  std::sort(buses.begin(), buses.end(), [](const LoadBus& a, const LoadBus& b) { return a.bus_id < b.bus_id; });
  for (std::size_t i = 1; i < buses.size(); ++i) {
    if (buses[i].bus_id == buses[i - 1].bus_id) throw Error("duplicate bus_id " + std::to_string(buses[i].bus_id));
  }

  SynthesisOutput out;
  out.buses.resize(buses.size());
  std::vector<std::vector<std::string>> warnings(buses.size());
  std::vector<std::exception_ptr> errors(buses.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < buses.size(); i = next++) {
      try {
        out.buses[i] = synthesize_bus(buses[i], in, config, &warnings[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(buses.size(), 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        throw Error("bus " + std::to_string(buses[i].bus_id) + ": " + e.what());
      }
    }
    for (auto& w : warnings[i]) out.warnings.push_back(std::move(w));
  }
  return out;
}

}  // namespace synthload
