#include "sailperf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sailperf/config.hpp"
#include "sailperf/csv.hpp"
#include "sailperf/harness.hpp"
#include "sailperf/rng.hpp"

namespace sailperf::cli {
namespace {

namespace fs = std::filesystem;

std::vector<char> to_labels(const std::vector<std::string>& raw) {
  std::vector<char> labels;
  for (const std::string& s : raw) {
    if (s.size() != 1) {
      throw std::invalid_argument("wind configuration labels are single letters A..I, got \"" +
                                  s + "\"");
    }
    wind::config_from_label(s[0]);
    labels.push_back(s[0]);
  }
  return labels;
}

std::string log_name(int course, char config, int fou, int repeat) {
  std::ostringstream name;
  name << course << '_' << config << '_' << fou << '_' << repeat << ".csv";
  return name.str();
}

int do_run(const config::AppConfig& cfg, std::ostream& out) {
  harness::RunSink sink;
  if (cfg.write_logs) {
    const fs::path log_dir = cfg.out_dir / "logs";
    sink = [log_dir](const harness::RunResult& run, const sim::RunLog& log) {
      csvio::write_run_log(
          log_dir / log_name(run.course, run.config, run.fou, run.repeat), log);
    };
  }
  const harness::GridResult result =
      harness::run_grid(cfg.grid, cfg.params, cfg.layout, cfg.threads, sink);
  harness::emit_summary(result.rows, cfg.out_dir, cfg.normalized);
  harness::emit_wind_figures(result.runs, cfg.out_dir);
  harness::emit_normalized_panels(result.rows, cfg.out_dir);
  harness::write_summary_csv(out, result.rows);
  out << "# " << result.runs.size() << " runs -> " << cfg.out_dir.string() << "\n";
  return 0;
}

int do_single(const config::AppConfig& cfg, int course, char config_label,
              int fou, int repeat, bool to_file, std::ostream& out) {
  const std::uint64_t seed =
      harness::run_seed(cfg.grid, course, config_label, fou, repeat);
  const fuzzy::RuleBase rb = fuzzy::make_rule_base(cfg.layout, fou);
  const sim::Course course_def =
      sim::course_from_offset(course, cfg.params.single_leg);
  const wind::WindConfig wcfg = wind::config_from_label(config_label);
  const sim::RunLog log =
      sim::run_simulation(rb, course_def, wcfg, cfg.params, seed);

  if (!to_file) {
    csvio::write_run_log(out, log);
    return 0;
  }
  const fs::path path =
      cfg.out_dir / "logs" / log_name(course, config_label, fou, repeat);
  csvio::write_run_log(path, log);
  const metrics::MetricsRecord m =
      metrics::compute_metrics(log, sim::course_bearing(course_def));
  out << "wrote " << path.string() << "\n";
  out << "seed=" << seed << " steps=" << log.records.size()
      << " outcome=" << (log.outcome == sim::Outcome::kCompleted ? "completed" : "timed_out")
      << " rmse=" << csvio::format_double(m.rmse)
      << " um=" << csvio::format_double(m.uncertainty_measure)
      << " bd=" << csvio::format_double(m.base_difficulty)
      << " rp=" << csvio::format_double(m.rel_perf) << "\n";
  return 0;
}

int do_report(const config::AppConfig& cfg, std::ostream& out) {
  const fs::path log_dir = cfg.out_dir / "logs";
  if (!fs::is_directory(log_dir)) {
    throw std::runtime_error("no run logs under " + log_dir.string() +
                             "; run with --write-logs first");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(log_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw std::runtime_error("no run logs under " + log_dir.string());
  }

  // A run that used every timeout step is a timeout; completed runs exit
  // the loop early. (A run finishing exactly on the last step is counted
  // as timed out; that only affects the completion-rate column.)
  const auto timeout_steps = static_cast<std::size_t>(
      std::llround(cfg.params.timeout_s / cfg.params.dt));

  std::vector<harness::RunResult> runs;
  for (const fs::path& file : files) {
    int course = 0, fou = 0, repeat = 0;
    char config_label = 0;
    std::istringstream stem(file.stem().string());
    char sep1 = 0, sep2 = 0, sep3 = 0;
    if (!(stem >> course >> sep1 >> config_label >> sep2 >> fou >> sep3 >> repeat) ||
        sep1 != '_' || sep2 != '_' || sep3 != '_' || !stem.eof()) {
      throw std::runtime_error("unrecognized run-log name " + file.string() +
                               " (expected course_config_fou_repeat.csv)");
    }
    wind::config_from_label(config_label);
    const sim::RunLog log = csvio::read_run_log(file);
    const sim::Course course_def =
        sim::course_from_offset(course, cfg.params.single_leg);

    harness::RunResult run;
    run.course = course;
    run.config = config_label;
    run.fou = fou;
    run.repeat = repeat;
    run.metrics = metrics::compute_metrics(log, sim::course_bearing(course_def));
    run.outcome = log.records.size() >= timeout_steps ? sim::Outcome::kTimedOut
                                                      : sim::Outcome::kCompleted;
    run.steps = log.records.size();
    runs.push_back(run);
  }

  const std::vector<harness::SummaryRow> rows = harness::summarize(runs);
  harness::emit_summary(rows, cfg.out_dir, cfg.normalized);
  harness::emit_normalized_panels(rows, cfg.out_dir);
  harness::write_summary_csv(out, rows);
  out << "# " << runs.size() << " logs -> " << (cfg.out_dir / "summary").string()
      << "\n";
  return 0;
}

int do_windcheck(const config::AppConfig& cfg, const std::vector<char>& labels,
                 int repeats, std::uint64_t seed, double duration,
                 bool to_file, std::ostream& out) {
  if (repeats < 1) {
    throw std::invalid_argument("windcheck needs repeats >= 1");
  }
  std::ostringstream table;
  table << "config,mean_sd_dir,mean_sd_speed\n";
  for (char label : labels) {
    const wind::WindConfig wcfg = wind::config_from_label(label);
    double sum_dir = 0.0, sum_speed = 0.0;
    for (int r = 0; r < repeats; ++r) {
      std::uint64_t h = 0;
      h = hash_combine(h, static_cast<std::uint64_t>(label));
      h = hash_combine(h, static_cast<std::uint64_t>(r));
      const wind::WindLog log = wind::generate_log(wcfg, cfg.params.wind,
                                                   duration, cfg.params.dt, seed ^ h);
      const wind::WindStats stats = wind::wind_stats(log);
      sum_dir += stats.sd_dir;
      sum_speed += stats.sd_speed;
    }
    table << label << ',' << csvio::format_double(sum_dir / repeats) << ','
          << csvio::format_double(sum_speed / repeats) << "\n";
  }
  out << table.str();
  if (to_file) {
    const fs::path path = cfg.out_dir / "wind" / "sigma_series.csv";
    fs::create_directories(path.parent_path());
    std::ofstream file(path);
    if (!file) {
      throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    file << table.str();
    out << "# wrote " << path.string() << "\n";
  }
  return 0;
}

}  // namespace

int cli_main(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"interval type-2 fuzzy heading controller, sailing simulator and "
               "uncertainty-weighted performance harness"};
  app.name("sailperf");
  app.require_subcommand(1);

  std::string params_file;
  std::vector<int> courses;
  std::vector<std::string> config_labels;
  std::vector<int> fous;
  int repeats = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  int threads = 0;
  int repeat = 0;
  double duration = 600.0;
  bool normalized = false;
  bool write_logs = false;
  bool unpaired = false;

  CLI::App* run_cmd =
      app.add_subcommand("run", "sweep the course x wind x FOU grid and write summaries");
  run_cmd->add_option("--course", courses, "course offsets in metres (default: 25 50 100)");
  run_cmd->add_option("--config", config_labels, "wind configuration labels A..I (default: all)");
  run_cmd->add_option("--fou", fous, "FOU sizes in degrees (default: 0 5 10 15 20 25)");
  run_cmd->add_option("--repeats", repeats, "repeats per grid cell (default: 30)");
  run_cmd->add_option("--seed", seed, "base seed (default: 1)");
  run_cmd->add_option("--out-dir", out_dir, "output directory (default: out)");
  run_cmd->add_option("--params", params_file, "JSON parameter file; flags override it");
  run_cmd->add_option("--threads", threads, "worker threads (default: 1)");
  run_cmd->add_flag("--normalized", normalized, "column-normalized markdown tables");
  run_cmd->add_flag("--write-logs", write_logs, "write per-run logs under out-dir/logs");
  run_cmd->add_flag("--unpaired", unpaired,
                    "re-derive wind seeds per FOU size instead of pairing repeats");

  CLI::App* single_cmd =
      app.add_subcommand("single", "one run, dumped as a run-log CSV");
  single_cmd->add_option("--course", courses, "course offset in metres (default: 25)")
      ->expected(1);
  single_cmd->add_option("--config", config_labels, "wind configuration label (default: A)")
      ->expected(1);
  single_cmd->add_option("--fou", fous, "FOU size in degrees (default: 0)")->expected(1);
  single_cmd->add_option("--repeat", repeat, "repeat index within the cell (default: 0)");
  single_cmd->add_option("--seed", seed, "base seed (default: 1)");
  single_cmd->add_option("--out-dir", out_dir,
                         "write under out-dir/logs instead of stdout");
  single_cmd->add_option("--params", params_file, "JSON parameter file; flags override it");

  CLI::App* report_cmd = app.add_subcommand(
      "report", "recompute summary tables from stored run logs");
  report_cmd->add_option("--out-dir", out_dir, "directory holding logs/ (default: out)");
  report_cmd->add_option("--params", params_file, "JSON parameter file; flags override it");
  report_cmd->add_flag("--normalized", normalized, "column-normalized markdown tables");

  CLI::App* wind_cmd = app.add_subcommand(
      "windcheck", "wind-process standard deviations per configuration");
  wind_cmd->add_option("--config", config_labels, "labels to check (default: all)");
  wind_cmd->add_option("--repeats", repeats, "seeds per configuration (default: 30)");
  wind_cmd->add_option("--seed", seed, "base seed (default: 1)");
  wind_cmd->add_option("--duration", duration, "seconds of wind per seed (default: 600)");
  wind_cmd->add_option("--out-dir", out_dir, "also write wind/sigma_series.csv");
  wind_cmd->add_option("--params", params_file, "JSON parameter file; flags override it");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    config::AppConfig cfg = params_file.empty() ? config::AppConfig{}
                                                : config::load_config(params_file);
    CLI::App* cmd = app.get_subcommands().front();
    auto given = [cmd](const std::string& name) {
      const CLI::Option* opt = cmd->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--seed")) cfg.grid.base_seed = seed;
    if (given("--repeats")) cfg.grid.repeats = repeats;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    const std::vector<char> labels = to_labels(config_labels);

    if (cmd == run_cmd) {
      if (!courses.empty()) cfg.grid.courses = courses;
      if (!labels.empty()) cfg.grid.configs = labels;
      if (!fous.empty()) cfg.grid.fou_sizes = fous;
      if (given("--threads")) cfg.threads = threads;
      if (normalized) cfg.normalized = true;
      if (write_logs) cfg.write_logs = true;
      if (unpaired) cfg.grid.paired_wind_seeds = false;
      return do_run(cfg, out);
    }
    if (cmd == single_cmd) {
      const int course = courses.empty() ? 25 : courses.front();
      const char label = labels.empty() ? 'A' : labels.front();
      const int fou = fous.empty() ? 0 : fous.front();
      return do_single(cfg, course, label, fou, repeat,
                       given("--out-dir"), out);
    }
    if (cmd == report_cmd) {
      if (normalized) cfg.normalized = true;
      return do_report(cfg, out);
    }
    const std::vector<char> check_labels =
        labels.empty() ? std::vector<char>(wind::kConfigLabels.begin(),
                                           wind::kConfigLabels.end())
                       : labels;
    return do_windcheck(cfg, check_labels, given("--repeats") ? repeats : 30,
                        cfg.grid.base_seed, duration,
                        given("--out-dir"), out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sailperf::cli
