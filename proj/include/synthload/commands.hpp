#pragma once

// File-level drivers behind the command line: each command reads its inputs,
// runs the pipeline stage and writes its outputs atomically.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synthload/aggregation.hpp"
#include "synthload/csv.hpp"
#include "synthload/desk_corpus.hpp"
#include "synthload/ingest.hpp"
#include "synthload/pipeline.hpp"
#include "synthload/prototypes.hpp"
#include "synthload/scenario.hpp"
#include "synthload/series_io.hpp"
#include "synthload/validation.hpp"

namespace synthload::commands {

namespace fs = std::filesystem;

// Fixed file names inside a corpus directory.
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kBusesFile = "buses.csv";
inline constexpr const char* kFacilitiesFile = "facilities.csv";
inline constexpr const char* kSectorCurvesFile = "sector_curves.csv";
inline constexpr const char* kUtilitiesFile = "utilities.csv";
inline constexpr const char* kSolarFile = "solar.csv";

// ---------------------------------------------------------------------------
// Composition ratio table: bus_id,utility_id,residential,commercial,industrial
// ---------------------------------------------------------------------------

inline constexpr std::string_view kRatioHeader = "bus_id,utility_id,residential,commercial,industrial";

struct BusRatio {
  std::int64_t bus_id = 0;
  std::string utility_id;
  CompositionRatio ratio;

  friend bool operator==(const BusRatio&, const BusRatio&) = default;
};

inline std::string serialize_ratios(const std::vector<BusRatio>& rows) {
  std::string out(kRatioHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.bus_id) + ',' + r.utility_id;
    for (double v : {r.ratio.residential, r.ratio.commercial, r.ratio.industrial}) {
      out += ',';
      csv::append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

inline std::vector<BusRatio> parse_ratios(std::string_view text, std::string_view source = "ratios") {
  csv::LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw Error(std::string(source) + ": empty ratio table");
  csv::expect_header(line, kRatioHeader, source);
  std::vector<BusRatio> rows;
  while (reader.next(line)) {
    if (csv::trim(line).empty()) continue;
    const auto ctx = csv::where(source, reader.line_no());
    const auto f = csv::split(line);
    if (f.size() != 5) throw Error(ctx + "expected 5 fields");
    try {
      rows.push_back({csv::parse_int(f[0], ctx), std::string(f[1]),
                      make_composition_ratio(csv::parse_double(f[2], ctx), csv::parse_double(f[3], ctx),
                                             csv::parse_double(f[4], ctx))});
    } catch (const Error& e) {
      const std::string msg = e.what();
      throw Error(msg.rfind(ctx, 0) == 0 ? msg : ctx + msg);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// gen-corpus
// ---------------------------------------------------------------------------

struct GenCorpusArgs {
  desk::Options options;
  fs::path out;
};

inline void write_corpus(const desk::Corpus& corpus, const fs::path& out) {
  std::vector<ManifestEntry> manifest;
  for (const auto& p : corpus.profiles) {
    const std::string file = "profiles/" + p.profile_id + ".csv";
    csv::write_file_atomic(out / file, serialize_profile_values(p.series));
    manifest.push_back({file, p.kind, p.subtype, p.location, p.region});
  }
  csv::write_file_atomic(out / kManifestFile, serialize_manifest(manifest));
  csv::write_file_atomic(out / kFacilitiesFile, serialize_facilities(corpus.facilities));
  csv::write_file_atomic(out / kSectorCurvesFile, serialize_sector_curves(corpus.sector_curves));
  csv::write_file_atomic(out / kUtilitiesFile, serialize_utilities(corpus.utilities));
  csv::write_file_atomic(out / kSolarFile, serialize_solar_resources(corpus.solar));
  csv::write_file_atomic(out / kBusesFile, serialize_bus_table(corpus.buses));
}

inline void cmd_gen_corpus(const GenCorpusArgs& args) {
  if (args.out.empty()) throw Error("--out is required");
  write_corpus(desk::generate_corpus(args.options), args.out);
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
  fs::path corpus;  // directory holding the fixed-name files below unless overridden
  fs::path manifest, buses, facilities, sector_curves, utilities;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  AggregationConfig aggregation;
  bool reactive = false;
  fs::path out;
};

inline fs::path resolve(const fs::path& explicit_path, const fs::path& dir, const char* name) {
  if (!explicit_path.empty()) return explicit_path;
  if (dir.empty()) throw Error(std::string("no path for ") + name + " (give --corpus or the file flag)");
  return dir / name;
}

inline SynthesisInputs load_synthesis_inputs(const SynthArgs& args, std::vector<std::string>* warnings) {
  SynthesisInputs in;
  const auto bus_path = resolve(args.buses, args.corpus, kBusesFile);
  in.buses = parse_bus_table(csv::read_file(bus_path), bus_path.string());
  in.profiles = parse_prototype_corpus(resolve(args.manifest, args.corpus, kManifestFile), warnings);
  const auto fac_path = resolve(args.facilities, args.corpus, kFacilitiesFile);
  const auto curve_path = resolve(args.sector_curves, args.corpus, kSectorCurvesFile);
  const auto facilities = parse_facilities(csv::read_file(fac_path), fac_path.string());
  const auto curves = parse_sector_curves(csv::read_file(curve_path), curve_path.string());
  in.industrial = synthesize_industrial_corpus(facilities, curves, args.seed);
  const auto util_path = resolve(args.utilities, args.corpus, kUtilitiesFile);
  in.utilities = parse_utilities(csv::read_file(util_path), util_path.string());
  return in;
}

inline nlohmann::json synthesis_metadata(const SynthesisOutput& out, const SynthArgs& args) {
  nlohmann::json meta;
  meta["seed"] = args.seed;
  meta["aggregation"] = {
      {"sigma_shift_hours", args.aggregation.sigma_shift},
      {"permutation_pairs", args.aggregation.permutation_pairs},
      {"noise_sigma_frac", args.aggregation.noise_sigma_frac},
  };
  auto& buses = meta["buses"] = nlohmann::json::array();
  for (const auto& b : out.buses) {
    const auto& r = b.result;
    buses.push_back({
        {"bus_id", b.bus.bus_id},
        {"peak_mw", b.bus.peak_mw},
        {"utility_id", b.utility_id},
        {"composition",
         {{"residential", b.ratio.residential}, {"commercial", b.ratio.commercial}, {"industrial", b.ratio.industrial}}},
        {"draws", {{"residential", r.draws[0]}, {"commercial", r.draws[1]}, {"industrial", r.draws[2]}}},
        {"reference_load_factor", r.reference_load_factor},
        {"reference_feeders", r.reference_feeders},
        {"lf_constant_mw", r.lf_constant},
        {"lf_constant_clamped", r.lf_constant_clamped},
        {"final_scale", r.final_scale},
        {"load_factor", load_factor(r.series)},
    });
  }
  meta["warnings"] = out.warnings;
  return meta;
}

inline SynthesisOutput cmd_synth(const SynthArgs& args) {
  if (args.out.empty()) throw Error("--out is required");
  std::vector<std::string> warnings;
  const auto in = load_synthesis_inputs(args, &warnings);
  AggregationConfig config = args.aggregation;
  config.master_seed = args.seed;
  auto out = synthesize_system(in, config, args.threads);
  out.warnings.insert(out.warnings.begin(), warnings.begin(), warnings.end());

  std::vector<SeriesBlock> blocks;
  std::vector<BusRatio> ratios;
  for (const auto& b : out.buses) {
    blocks.push_back({b.bus.bus_id, b.result.series.values(), 0});
    ratios.push_back({b.bus.bus_id, b.utility_id, b.ratio});
  }
  csv::write_file_atomic(args.out / "series.csv", serialize_long_series(blocks));
  csv::write_file_atomic(args.out / "ratios.csv", serialize_ratios(ratios));
  csv::write_file_atomic(args.out / "metadata.json", synthesis_metadata(out, args).dump(1) + "\n");

  if (args.reactive) {
    std::vector<std::vector<double>> q;
    q.reserve(out.buses.size());
    std::vector<SeriesBlock> q_blocks;
    for (const auto& b : out.buses) {
      auto& v = q.emplace_back();
      for (double p : b.result.series.values()) v.push_back(reactive_mvar(p, b.bus.power_factor));
      q_blocks.push_back({b.bus.bus_id, v, 0});
    }
    csv::write_file_atomic(args.out / "series_q.csv", serialize_long_series(q_blocks, "q_mvar"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct ValidateArgs {
  fs::path series;
  fs::path bands;  // optional directory with <metric>.csv band files
  ValidationOptions options;
  bool per_bus = true;
  fs::path out;
};

inline ValidationBands load_bands(const fs::path& dir, const ValidationOptions& opt) {
  ValidationBands bands;
  bands.distribution_curve = default_distribution_band(opt.bin_width_pu);
  bands.autocorrelation = default_autocorrelation_band(opt.max_lag);
  if (dir.empty()) return bands;
  auto load = [&](Metric m, ReferenceBand& slot) {
    const auto path = dir / (std::string(to_string(m)) + ".csv");
    if (fs::exists(path)) slot = parse_band(csv::read_file(path), m, path.string());
  };
  load(Metric::monthly_load_factor, bands.monthly_load_factor);
  load(Metric::distribution_curve, bands.distribution_curve);
  load(Metric::autocorrelation, bands.autocorrelation);
  return bands;
}

inline nlohmann::json to_json(const SeriesReport& report) {
  nlohmann::json j;
  j["label"] = report.label;
  for (const auto& m : report.metrics) {
    nlohmann::json mj;
    mj["axis"] = m.axis;
    mj["values"] = m.values;
    mj["inside"] = m.inside;
    mj["pass_fraction"] = m.pass_fraction;
    if (!m.error.empty()) mj["error"] = m.error;
    j["metrics"][std::string(to_string(m.metric))] = mj;
  }
  return j;
}

/// System series = hourly sum over all buses in the table.
inline HourlySeries system_series(const LongSeriesTable& table) {
  std::vector<double> sum(kHoursPerYear, 0.0);
  for (auto id : table.bus_ids()) {
    const auto s = table.hourly(id);
    for (std::size_t t = 0; t < kHoursPerYear; ++t) sum[t] += s[t];
  }
  return HourlySeries(std::move(sum), "system");
}

struct ValidationReport {
  SeriesReport system;
  std::vector<SeriesReport> buses;
};

inline ValidationReport cmd_validate(const ValidateArgs& args) {
  if (args.out.empty()) throw Error("--out is required");
  const auto table = parse_long_series(csv::read_file(args.series), args.series.string());
  if (table.rows.empty()) throw Error(args.series.string() + ": no series rows");
  const auto bands = load_bands(args.bands, args.options);

  ValidationReport report;
  report.system = evaluate_series(system_series(table), bands, args.options);
  if (args.per_bus) {
    for (auto id : table.bus_ids()) report.buses.push_back(evaluate_series(table.hourly(id), bands, args.options));
  }

  nlohmann::json doc;
  doc["system"] = to_json(report.system);
  doc["buses"] = nlohmann::json::array();
  for (const auto& b : report.buses) doc["buses"].push_back(to_json(b));
  csv::write_file_atomic(args.out / "report.json", doc.dump(1) + "\n");

  for (const auto& m : report.system.metrics) {
    const auto& band = bands[m.metric];
    std::string text = "axis,value,lower,upper\n";
    for (std::size_t i = 0; i < m.values.size(); ++i) {
      csv::append_double(text, m.axis[i]);
      text += ',';
      csv::append_double(text, m.values[i]);
      text += ',';
      csv::append_double(text, band.lower[i]);
      text += ',';
      csv::append_double(text, band.upper[i]);
      text += '\n';
    }
    csv::write_file_atomic(args.out / (std::string(to_string(m.metric)) + ".csv"), text);
  }
  return report;
}

// ---------------------------------------------------------------------------
// scenario
// ---------------------------------------------------------------------------

struct ScenarioArgs {
  fs::path series, buses, ratios, solar;
  DuckCurveConfig config;
  fs::path out;
};

inline DuckCurveResult cmd_scenario(const ScenarioArgs& args) {
  if (args.out.empty()) throw Error("--out is required");
  const auto table = parse_long_series(csv::read_file(args.series), args.series.string());
  const auto buses = parse_bus_table(csv::read_file(args.buses), args.buses.string());
  const auto ratio_rows = parse_ratios(csv::read_file(args.ratios), args.ratios.string());
  const auto solar = parse_solar_resources(csv::read_file(args.solar), args.solar.string());

  std::map<std::int64_t, CompositionRatio> ratio_of;
  for (const auto& r : ratio_rows) ratio_of[r.bus_id] = r.ratio;

  std::vector<HourlySeries> benchmarks;
  std::vector<ScenarioBus> inputs;
  benchmarks.reserve(buses.size());
  for (const auto& b : buses) {
    const auto it = ratio_of.find(b.bus_id);
    if (it == ratio_of.end()) throw Error("no composition ratio for bus " + std::to_string(b.bus_id));
    benchmarks.push_back(table.hourly(b.bus_id));
    inputs.push_back({b, it->second, nullptr});
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) inputs[i].benchmark = &benchmarks[i];
  std::sort(inputs.begin(), inputs.end(),
            [](const ScenarioBus& a, const ScenarioBus& b) { return a.bus.bus_id < b.bus.bus_id; });

  const auto result = apply_duck_curve(inputs, solar, args.config);

  const std::size_t first_hour = args.config.day_index * kHoursPerDay;
  std::vector<SeriesBlock> net, btm;
  std::string allocation = "bus_id,btm_capacity_mw\n";
  std::string anchors = "bus_id,start_hour,peak_hour,end_hour\n";
  for (const auto& b : result.buses) {
    net.push_back({b.bus_id, b.net_mw, first_hour});
    btm.push_back({b.bus_id, b.solar.output_mw, first_hour});
    allocation += std::to_string(b.bus_id) + ',';
    csv::append_double(allocation, b.btm_capacity_mw);
    allocation += '\n';
    anchors += std::to_string(b.bus_id) + ',' + std::to_string(b.solar.start_hour) + ',' +
               std::to_string(b.solar.peak_hour) + ',' + std::to_string(b.solar.end_hour) + '\n';
  }
  std::string system = "hour,benchmark_mw,net_mw\n";
  for (std::size_t h = 0; h < kHoursPerDay; ++h) {
    system += std::to_string(first_hour + h) + ',';
    csv::append_double(system, result.system_benchmark_mw[h]);
    system += ',';
    csv::append_double(system, result.system_net_mw[h]);
    system += '\n';
  }
  csv::write_file_atomic(args.out / "net_load.csv", serialize_long_series(net));
  csv::write_file_atomic(args.out / "btm_solar.csv", serialize_long_series(btm));
  csv::write_file_atomic(args.out / "allocation.csv", allocation);
  csv::write_file_atomic(args.out / "btm_anchors.csv", anchors);
  csv::write_file_atomic(args.out / "system.csv", system);
  return result;
}

}  // namespace synthload::commands
