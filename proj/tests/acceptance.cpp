// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "synthload/synthload.hpp"
#include "test_support.hpp"

using namespace synthload;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome out;
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << "[exception: " << e.what() << "]";
  }
  if (!out.pass) ++failures;
  std::printf("%s criterion %d: %s -- %s\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.str().c_str());
  std::fflush(stdout);
}

double normal_cdf(double z) { return synthload::testing::normal_cdf(z); }

/// Shared desk run: corpus, synthesis, validation and duck curve on disk.
struct DeskRun {
  fs::path root;
  desk::Options options;
  commands::SynthArgs synth;
  SynthesisOutput output;
  commands::ValidationReport report;
  DuckCurveResult duck;
  commands::ScenarioArgs scenario;
  double seconds = 0.0;
};

DeskRun run_desk(const fs::path& root, unsigned threads) {
  DeskRun run;
  run.root = root;
  run.options.seed = 42;
  run.options.n_buses = 50;
  const auto t0 = Clock::now();
  commands::cmd_gen_corpus({run.options, root / "corpus"});
  run.synth.corpus = root / "corpus";
  run.synth.seed = 42;
  run.synth.threads = threads;
  run.synth.reactive = true;
  run.synth.out = root / "run";
  run.output = commands::cmd_synth(run.synth);
  run.seconds = seconds_since(t0);

  commands::ValidateArgs val;
  val.series = root / "run/series.csv";
  val.out = root / "report";
  run.report = commands::cmd_validate(val);

  run.scenario.series = root / "run/series.csv";
  run.scenario.buses = root / "corpus/buses.csv";
  run.scenario.ratios = root / "run/ratios.csv";
  run.scenario.solar = root / "corpus/solar.csv";
  run.scenario.config.seed = 42;
  run.scenario.out = root / "duck";
  run.duck = commands::cmd_scenario(run.scenario);
  return run;
}

const char* kEmittedFiles[] = {
    "corpus/manifest.json",   "corpus/buses.csv",     "corpus/facilities.csv", "corpus/sector_curves.csv",
    "corpus/utilities.csv",   "corpus/solar.csv",     "corpus/profiles/res_000.csv",
    "run/series.csv",         "run/series_q.csv",     "run/ratios.csv",        "run/metadata.json",
    "report/report.json",     "report/monthly_load_factor.csv", "report/distribution_curve.csv",
    "report/autocorrelation.csv", "duck/net_load.csv", "duck/btm_solar.csv",  "duck/allocation.csv",
    "duck/btm_anchors.csv",   "duck/system.csv",
};

std::vector<std::vector<double>> numeric_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  csv::LineReader reader(text);
  std::string_view line;
  reader.next(line);
  while (reader.next(line)) {
    auto& row = rows.emplace_back();
    for (auto f : csv::split(line)) row.push_back(csv::parse_double(f, "row"));
  }
  return rows;
}

}  // namespace

int main() {
  synthload::testing::TempDir scratch("acceptance");

  criterion(1, "selection weights {1,4} -> {2/3,1/3} within 0.01 over 1e5 draws, < 1 s", [](Outcome& o) {
    const auto t0 = Clock::now();
    const std::vector<double> means{1.0, 4.0};
    const auto w = selection_weights(means);
    Rng rng(1);
    int first = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) first += sample_index(w, rng) == 0;
    const double secs = seconds_since(t0);
    const double f0 = first / double(n), f1 = 1.0 - f0;
    o.detail << "freq " << f0 << " / " << f1 << ", " << secs << " s";
    o.check(std::abs(f0 - 2.0 / 3.0) <= 0.01 && std::abs(f1 - 1.0 / 3.0) <= 0.01, "frequencies");
    o.check(secs < 1.0, "runtime");
  });

  criterion(2, "time shift sigma 0.4: P(0) within 0.01 of 0.7887, mean within 0.02", [](Outcome& o) {
    const double p0 = normal_cdf(1.25) - normal_cdf(-1.25);
    Rng rng(2);
    int zeros = 0;
    long long sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const auto x = sample_time_shift(0.4, rng);
      zeros += x == 0;
      sum += x;
    }
    const double f = zeros / double(n), mean = sum / double(n);
    o.detail << "P(0) " << f << " (expected " << p0 << "), mean " << mean;
    o.check(std::abs(f - p0) <= 0.01, "P(0)");
    o.check(std::abs(mean) <= 0.02, "mean");
  });

  criterion(3, "load-factor constant: C = 25 exactly, identity within 1e-9, clamp -> 0", [](Outcome& o) {
    const double c = lf_constant(50.0, 100.0, 0.6);
    const double identity = (c + 50.0) / (c + 100.0);
    const auto clamped = solve_lf_constant(50.0, 100.0, 0.4);
    o.detail << "C " << c << ", identity " << identity << ", clamp " << clamped.value;
    o.check(c == 25.0, "C");
    o.check(std::abs(identity - 0.6) <= 1e-9, "identity");
    o.check(clamped.value == 0.0 && clamped.clamped, "clamp");
  });

  const DeskRun desk_run = run_desk(scratch.path() / "a", 1);

  criterion(4, "desk synthesis, 50 buses, seed 42: peak exact, LF = feeder reference, < 60 s", [&](Outcome& o) {
    double worst_peak = 0.0, worst_lf = 0.0;
    std::size_t unclamped = 0;
    for (const auto& b : desk_run.output.buses) {
      const auto& r = b.result;
      worst_peak = std::max(worst_peak, std::abs(r.series.max() - b.bus.peak_mw) / b.bus.peak_mw);
      if (!r.lf_constant_clamped) {
        ++unclamped;
        worst_lf = std::max(worst_lf, std::abs(load_factor(r.series) - r.reference_load_factor));
      }
    }
    o.detail << desk_run.output.buses.size() << " buses, max peak rel err " << worst_peak << ", " << unclamped
             << " unclamped with max LF err " << worst_lf << ", " << desk_run.seconds << " s";
    o.check(desk_run.output.buses.size() == 50, "bus count");
    o.check(worst_peak <= 1e-6, "peak");
    o.check(unclamped > 0, "at least one unclamped bus");
    o.check(worst_lf <= 1e-6, "load factor");
    o.check(desk_run.seconds < 60.0, "runtime");
  });

  criterion(5, "industrial synthesis: 100 random facilities sum to annual energy within 1e-6", [](Outcome& o) {
    desk::Options opt;
    std::vector<DailySectorCurve> curves;
    for (const auto& shape : desk::kSectorShapes) curves.push_back(desk::sector_curve(shape));
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> log_energy(1.0, 7.0), hours(0.0, 8760.0);
    std::vector<IndustrialFacilityRecord> facilities;
    for (int i = 0; i < 100; ++i) {
      facilities.push_back({"F" + std::to_string(i), curves[gen() % curves.size()].sector_code,
                            std::pow(10.0, log_energy(gen)), hours(gen)});
    }
    const auto years = synthesize_industrial_corpus(facilities, curves, 42);
    double worst = 0.0;
    for (std::size_t i = 0; i < years.size(); ++i) {
      const double sum = static_cast<double>(synthload::testing::oracle_sum(years[i].series));
      worst = std::max(worst, std::abs(sum - facilities[i].annual_energy_mwh) / facilities[i].annual_energy_mwh);
    }
    o.detail << years.size() << " facilities, max rel err " << worst;
    o.check(years.size() == 100, "count");
    o.check(worst <= 1e-6, "energy");
  });

  criterion(6, "determinism: identical runs and a different thread count give identical bytes", [&](Outcome& o) {
    const DeskRun again = run_desk(scratch.path() / "b", 1);
    const DeskRun threaded = run_desk(scratch.path() / "c", 4);
    std::size_t compared = 0;
    for (const char* f : kEmittedFiles) {
      const auto a = csv::read_file(desk_run.root / f);
      o.check(a == csv::read_file(again.root / f), std::string("rerun ") + f);
      o.check(a == csv::read_file(threaded.root / f), std::string("threads ") + f);
      ++compared;
    }
    o.detail << compared << " files compared across 3 runs (threads 1, 1, 4)";
  });

  criterion(7, "validation metrics vs oracles: sine ACF, constant distribution and monthly LF", [](Outcome& o) {
    constexpr double kPi = 3.14159265358979323846;
    const auto sine =
        synthload::testing::from_function([](std::size_t t) { return 2.0 + std::sin(2.0 * kPi * double(t) / 24.0); });
    const auto r = autocorrelation(sine, 48);
    const auto flat = HourlySeries::constant(5.0);
    const auto dist = distribution_curve(flat);
    const auto lf = monthly_load_factors(flat);
    double mass_at_one = 0.0, mass_elsewhere = 0.0;
    for (std::size_t i = 0; i < dist.fractions.size(); ++i) {
      const double lo = static_cast<double>(i) * dist.bin_width;
      const bool one = lo <= 1.0 && 1.0 < lo + dist.bin_width;
      (one ? mass_at_one : mass_elsewhere) += dist.fractions[i];
    }
    bool all_ones = lf.size() == 12;
    for (double v : lf) all_ones = all_ones && v == 1.0;
    o.detail << "r(24) " << r[24] << ", r(12) " << r[12] << ", mass at 1.0 p.u. " << mass_at_one;
    o.check(std::abs(r[24] - 1.0) <= 0.01 && std::abs(r[12] + 1.0) <= 0.01, "acf");
    o.check(std::abs(mass_at_one - 1.0) <= 1e-12 && mass_elsewhere == 0.0, "point mass");
    o.check(all_ones, "monthly lf");
  });

  criterion(8, "desk system ACF peaks at 24 (r >= 0.7), dips near 12; >= 95% mass in [0.4, 1.8] p.u.", [&](Outcome& o) {
    const auto& acf = desk_run.report.system.metrics[2].values;
    o.check(acf.size() == 49, "acf length");
    const bool local_max = acf[24] > acf[23] && acf[24] > acf[25];
    std::size_t argmin = 1;
    for (std::size_t k = 1; k < 24; ++k) {
      if (acf[k] < acf[argmin]) argmin = k;
    }
    const auto table = parse_long_series(csv::read_file(desk_run.root / "run/series.csv"));
    const auto system = commands::system_series(table);
    const double mean = series_mean(system);
    std::size_t inside = 0;
    for (double x : system.values()) inside += (x / mean >= 0.4 && x / mean <= 1.8);
    const double mass = inside / double(kHoursPerYear);
    o.detail << "r(24) " << acf[24] << ", ACF minimum over 1..23 at lag " << argmin << " (r " << acf[argmin]
             << "), mass in band " << mass;
    o.check(local_max && acf[24] >= 0.7, "lag-24 peak");
    o.check(argmin >= 10 && argmin <= 14 && acf[argmin] < acf[argmin - 1] && acf[argmin] < acf[argmin + 1],
            "minimum near 12");
    o.check(mass >= 0.95, "distribution mass");
  });

  criterion(9, "duck curve: 30,000 MW allocated, BTM anchor contract, midday minimum below 9 am", [&](Outcome& o) {
    double total = 0.0;
    bool anchors_ok = true;
    for (const auto& b : desk_run.duck.buses) {
      total += b.btm_capacity_mw;
      const auto& s = b.solar;
      anchors_ok = anchors_ok && s.output_mw[static_cast<std::size_t>(s.peak_hour)] == b.btm_capacity_mw;
      for (int h = 0; h < 24; ++h) {
        if (h < s.start_hour || h > s.end_hour) anchors_ok = anchors_ok && s.output_mw[static_cast<std::size_t>(h)] == 0.0;
        anchors_ok = anchors_ok && s.output_mw[static_cast<std::size_t>(h)] <= b.btm_capacity_mw;
      }
    }
    const auto& net = desk_run.duck.system_net_mw;
    double midday = net[11];
    for (std::size_t h = 11; h <= 15; ++h) midday = std::min(midday, net[h]);
    const double target = desk_run.scenario.config.system_btm_capacity_mw;
    o.detail << "allocated " << total << " MW, system net 9h " << net[9] << " MW, midday min " << midday << " MW";
    o.check(target == 30000.0 && std::abs(total - target) / target <= 1e-9, "allocation");
    o.check(anchors_ok, "anchors");
    o.check(midday < net[9], "duck shape");
  });

  criterion(10, "round-trip: every emitted CSV re-parses to the in-memory values", [&](Outcome& o) {
    std::size_t checked = 0;
    const auto& root = desk_run.root;
    // Corpus files.
    const auto corpus = desk::generate_corpus(desk_run.options);
    const auto profiles = parse_prototype_corpus(root / "corpus/manifest.json");
    bool ok = profiles.size() == corpus.profiles.size();
    for (std::size_t i = 0; ok && i < profiles.size(); ++i) {
      ok = profiles[i].series == corpus.profiles[i].series && profiles[i].location == corpus.profiles[i].location;
    }
    o.check(ok, "profiles");
    checked += profiles.size() + 1;
    const auto buses = parse_bus_table(csv::read_file(root / "corpus/buses.csv"));
    ok = buses.size() == corpus.buses.size();
    for (std::size_t i = 0; ok && i < buses.size(); ++i) {
      ok = buses[i].bus_id == corpus.buses[i].bus_id && buses[i].location == corpus.buses[i].location &&
           buses[i].peak_mw == corpus.buses[i].peak_mw && buses[i].power_factor == corpus.buses[i].power_factor;
    }
    o.check(ok, "buses");
    o.check(parse_facilities(csv::read_file(root / "corpus/facilities.csv")) == corpus.facilities, "facilities");
    o.check(parse_sector_curves(csv::read_file(root / "corpus/sector_curves.csv")) == corpus.sector_curves, "curves");
    o.check(parse_utilities(csv::read_file(root / "corpus/utilities.csv")) == corpus.utilities, "utilities");
    o.check(parse_solar_resources(csv::read_file(root / "corpus/solar.csv")) == corpus.solar, "solar");
    checked += 5;

    // Synthesis outputs.
    const auto p = parse_long_series(csv::read_file(root / "run/series.csv"));
    const auto q = parse_long_series(csv::read_file(root / "run/series_q.csv"), "q", "q_mvar");
    const auto ratios = commands::parse_ratios(csv::read_file(root / "run/ratios.csv"));
    ok = ratios.size() == desk_run.output.buses.size();
    for (std::size_t i = 0; ok && i < desk_run.output.buses.size(); ++i) {
      const auto& b = desk_run.output.buses[i];
      ok = p.hourly(b.bus.bus_id).vector() == b.result.series.vector() && ratios[i].bus_id == b.bus.bus_id &&
           ratios[i].ratio == b.ratio && ratios[i].utility_id == b.utility_id;
      const auto qs = q.hourly(b.bus.bus_id);
      for (std::size_t t = 0; ok && t < kHoursPerYear; ++t) {
        ok = qs[t] == reactive_mvar(b.result.series[t], b.bus.power_factor);
      }
    }
    o.check(ok, "series / ratios");
    checked += 3;

    // Validation outputs.
    const char* metric_files[] = {"report/monthly_load_factor.csv", "report/distribution_curve.csv",
                                  "report/autocorrelation.csv"};
    for (std::size_t m = 0; m < 3; ++m) {
      const auto rows = numeric_rows(csv::read_file(root / metric_files[m]));
      const auto& metric = desk_run.report.system.metrics[m];
      ok = rows.size() == metric.values.size();
      for (std::size_t i = 0; ok && i < rows.size(); ++i) ok = rows[i][0] == metric.axis[i] && rows[i][1] == metric.values[i];
      o.check(ok, metric_files[m]);
      ++checked;
    }

    // Scenario outputs.
    const auto net = parse_long_series(csv::read_file(root / "duck/net_load.csv"));
    const auto btm = parse_long_series(csv::read_file(root / "duck/btm_solar.csv"));
    const auto alloc = numeric_rows(csv::read_file(root / "duck/allocation.csv"));
    const auto anchors = numeric_rows(csv::read_file(root / "duck/btm_anchors.csv"));
    const auto system = numeric_rows(csv::read_file(root / "duck/system.csv"));
    ok = alloc.size() == desk_run.duck.buses.size() && anchors.size() == alloc.size() && system.size() == 24;
    for (std::size_t i = 0; ok && i < desk_run.duck.buses.size(); ++i) {
      const auto& b = desk_run.duck.buses[i];
      ok = alloc[i][1] == b.btm_capacity_mw && anchors[i][1] == b.solar.start_hour &&
           anchors[i][2] == b.solar.peak_hour && anchors[i][3] == b.solar.end_hour;
      for (std::size_t h = 0; ok && h < 24; ++h) {
        ok = net.rows.at(b.bus_id)[h].second == b.net_mw[h] && btm.rows.at(b.bus_id)[h].second == b.solar.output_mw[h];
      }
    }
    for (std::size_t h = 0; ok && h < 24; ++h) {
      ok = system[h][1] == desk_run.duck.system_benchmark_mw[h] && system[h][2] == desk_run.duck.system_net_mw[h];
    }
    o.check(ok, "scenario files");
    checked += 5;

    // A value sweep across magnitudes.
    std::mt19937_64 gen(10);
    std::uniform_real_distribution<double> mant(0.0, 10.0);
    std::uniform_int_distribution<int> expo(-12, 12);
    std::size_t exact = 0;
    for (int i = 0; i < 100000; ++i) {
      const double x = mant(gen) * std::pow(10.0, expo(gen));
      exact += csv::parse_double(csv::format_double(x), "sweep") == x;
    }
    o.check(exact == 100000, "double sweep");
    o.detail << checked << " files re-parsed exactly, " << exact << "/100000 random doubles exact";
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
