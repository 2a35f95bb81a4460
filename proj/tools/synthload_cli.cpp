// synthload: command-line front end.
//
//   synthload gen-corpus --seed 42 --locations 8 --out corpus/
//   synthload synth      --corpus corpus/ --seed 42 --out run/
//   synthload validate   --series run/series.csv --out report/
//   synthload scenario   --series run/series.csv --buses corpus/buses.csv
//                        --ratios run/ratios.csv --solar corpus/solar.csv --out duck/
//
// Every subcommand also takes --config FILE.json; its keys are option names
// (dashes or underscores) and command-line flags win over them.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "synthload/commands.hpp"

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw synthload::Error("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fills options not given on the command line from a flat JSON object whose
/// keys are option names (underscores or dashes).
void apply_json_config(CLI::App* cmd, const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw synthload::Error(path + ": " + e.what());
  }
  if (!doc.is_object()) throw synthload::Error(path + ": top level must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    auto* opt = cmd->get_option_no_throw("--" + name);
    if (!opt || name == "config") throw synthload::Error(path + ": unknown option '" + key + "'");
    if (opt->count() > 0) continue;
    auto text = [](const nlohmann::json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      return v.dump();
    };
    if (value.is_array()) {
      for (const auto& v : value) opt->add_result(text(v));
    } else {
      opt->add_result(text(value));
    }
    opt->run_callback();
  }
}

std::string config_path;

void add_config(CLI::App* cmd) {
  cmd->add_option("--config", config_path, "JSON file with option values; flags take precedence");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace synthload;

  CLI::App app{"Synthetic bus-level hourly load time series"};
  app.require_subcommand(1);

  // gen-corpus
  commands::GenCorpusArgs gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Write a deterministic desk-scale input corpus");
  add_config(gen_cmd);
  gen_cmd->add_option("--seed", gen.options.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--locations", gen.options.n_locations, "Number of weather locations")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--regions", gen.options.regions, "Feeder region tags")->capture_default_str();
  gen_cmd->add_option("--buses", gen.options.n_buses, "Number of buses in the generated bus table")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--system-peak-mw", gen.options.system_peak_mw, "Sum of generated bus peaks")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--feeders-per-region", gen.options.feeders_per_region)->capture_default_str();
  gen_cmd->add_option("--facilities", gen.options.n_facilities, "Industrial facility records")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();

  // synth
  commands::SynthArgs synth;
  std::string s_corpus, s_manifest, s_buses, s_fac, s_curves, s_util, s_out;
  auto* synth_cmd = app.add_subcommand("synth", "Synthesize bus-level load series");
  add_config(synth_cmd);
  synth_cmd->add_option("--corpus", s_corpus, "Corpus directory (gen-corpus layout)");
  synth_cmd->add_option("--manifest", s_manifest, "Profile manifest JSON");
  synth_cmd->add_option("--buses", s_buses, "Bus table CSV");
  synth_cmd->add_option("--facilities", s_fac, "Industrial facility CSV");
  synth_cmd->add_option("--sector-curves", s_curves, "Industrial daily sector curve CSV");
  synth_cmd->add_option("--utilities", s_util, "Utility sales CSV");
  synth_cmd->add_option("--seed", synth.seed, "Master seed")->capture_default_str();
  synth.threads = std::max(1u, std::thread::hardware_concurrency());
  synth_cmd->add_option("--threads", synth.threads, "Worker threads")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--noise-sigma", synth.aggregation.noise_sigma_frac, "Relative white-noise sigma")
      ->capture_default_str();
  synth_cmd->add_flag("--reactive", synth.reactive, "Also write q_mvar at each bus's power factor");
  synth_cmd->add_option("--out", s_out, "Output directory")->required();

  // validate
  commands::ValidateArgs val;
  std::string v_series, v_bands, v_out;
  auto* val_cmd = app.add_subcommand("validate", "Compute validation metrics against reference bands");
  add_config(val_cmd);
  val_cmd->add_option("--series", v_series, "Long-format series CSV")->required();
  val_cmd->add_option("--bands", v_bands, "Directory of <metric>.csv band files");
  val_cmd->add_option("--max-lag", val.options.max_lag, "Largest autocorrelation lag")->capture_default_str();
  val_cmd->add_option("--bin-width", val.options.bin_width_pu, "Distribution bin width (p.u.)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bool system_only = false;
  val_cmd->add_flag("--system-only", system_only, "Skip per-bus reports");
  std::uint64_t v_seed = 0;
  val_cmd->add_option("--seed", v_seed, "Unused; accepted for a uniform interface");
  val_cmd->add_option("--out", v_out, "Output directory")->required();

  // scenario
  commands::ScenarioArgs scen;
  std::string c_series, c_buses, c_ratios, c_solar, c_out;
  auto* scen_cmd = app.add_subcommand("scenario", "Build a behind-the-meter solar duck-curve day");
  add_config(scen_cmd);
  scen_cmd->add_option("--series", c_series, "Benchmark long-format series CSV")->required();
  scen_cmd->add_option("--buses", c_buses, "Bus table CSV")->required();
  scen_cmd->add_option("--ratios", c_ratios, "Composition ratio CSV written by synth")->required();
  scen_cmd->add_option("--solar", c_solar, "Solar resource CSV")->required();
  scen_cmd->add_option("--system-btm-capacity-mw", scen.config.system_btm_capacity_mw)
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  scen_cmd->add_option("--load-weight", scen.config.load_weight)->capture_default_str();
  scen_cmd->add_option("--solar-weight", scen.config.solar_weight)->capture_default_str();
  scen_cmd->add_option("--day-index", scen.config.day_index, "Day of year, 0-364")->capture_default_str();
  scen_cmd->add_option("--seed", scen.config.seed, "Seed for BTM anchor hours")->capture_default_str();
  scen_cmd->add_option("--out", c_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* cmd : {gen_cmd, synth_cmd, val_cmd, scen_cmd}) {
      if (cmd->parsed() && !config_path.empty()) apply_json_config(cmd, config_path);
    }
    if (gen_cmd->parsed()) {
      gen.out = gen_out;
      commands::cmd_gen_corpus(gen);
      std::cout << "wrote corpus to " << gen.out << "\n";
    } else if (synth_cmd->parsed()) {
      synth.corpus = s_corpus;
      synth.manifest = s_manifest;
      synth.buses = s_buses;
      synth.facilities = s_fac;
      synth.sector_curves = s_curves;
      synth.utilities = s_util;
      synth.out = s_out;
      const auto out = commands::cmd_synth(synth);
      for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "synthesized " << out.buses.size() << " buses into " << synth.out << "\n";
    } else if (val_cmd->parsed()) {
      val.series = v_series;
      val.bands = v_bands;
      val.out = v_out;
      val.per_bus = !system_only;
      const auto report = commands::cmd_validate(val);
      for (const auto& m : report.system.metrics) {
        std::cout << to_string(m.metric) << ": pass fraction " << m.pass_fraction
                  << (m.error.empty() ? "" : " (" + m.error + ")") << "\n";
      }
    } else if (scen_cmd->parsed()) {
      scen.series = c_series;
      scen.buses = c_buses;
      scen.ratios = c_ratios;
      scen.solar = c_solar;
      scen.out = c_out;
      const auto result = commands::cmd_scenario(scen);
      std::cout << "duck curve for day " << result.day_index << " over " << result.buses.size()
                << " buses written to " << scen.out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
