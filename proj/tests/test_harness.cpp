#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sailperf/cli.hpp"
#include "sailperf/config.hpp"
#include "sailperf/csv.hpp"
#include "sailperf/harness.hpp"

using namespace sailperf;
namespace fs = std::filesystem;

namespace {

harness::ExperimentGrid tiny_grid() {
  harness::ExperimentGrid grid;
  grid.courses = {25};
  grid.configs = {'A', 'I'};
  grid.fou_sizes = {0, 10};
  grid.repeats = 2;
  return grid;
}

std::string rows_as_csv(const std::vector<harness::SummaryRow>& rows) {
  std::ostringstream out;
  harness::write_summary_csv(out, rows);
  return out.str();
}

// Scratch directory that cleans up around each use.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::cli_main(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("run seeds are stable per cell and ignore FOU when paired") {
  harness::ExperimentGrid grid;
  CHECK(harness::run_seed(grid, 25, 'A', 0, 0) == harness::run_seed(grid, 25, 'A', 0, 0));
  CHECK(harness::run_seed(grid, 25, 'A', 0, 0) != harness::run_seed(grid, 25, 'A', 0, 1));
  CHECK(harness::run_seed(grid, 25, 'A', 0, 0) != harness::run_seed(grid, 25, 'B', 0, 0));
  CHECK(harness::run_seed(grid, 25, 'A', 0, 0) != harness::run_seed(grid, 50, 'A', 0, 0));

  CHECK(harness::run_seed(grid, 25, 'A', 0, 3) == harness::run_seed(grid, 25, 'A', 20, 3));
  grid.paired_wind_seeds = false;
  CHECK(harness::run_seed(grid, 25, 'A', 0, 3) != harness::run_seed(grid, 25, 'A', 20, 3));

  grid.base_seed = 42;
  const auto moved = harness::run_seed(grid, 25, 'A', 0, 3);
  grid.base_seed = 1;
  CHECK(moved != harness::run_seed(grid, 25, 'A', 0, 3));
}

TEST_CASE("a one-cell grid with one repeat produces exactly one run and row") {
  harness::ExperimentGrid grid;
  grid.courses = {25};
  grid.configs = {'E'};
  grid.fou_sizes = {10};
  grid.repeats = 1;

  int sink_calls = 0;
  const auto result = harness::run_grid(
      grid, sim::SimParams{}, fuzzy::ControllerLayout{}, 1,
      [&sink_calls](const harness::RunResult&, const sim::RunLog& log) {
        ++sink_calls;
        CHECK(!log.records.empty());
      });
  CHECK(sink_calls == 1);
  REQUIRE(result.runs.size() == 1);
  REQUIRE(result.rows.size() == 1);
  const auto& row = result.rows.front();
  CHECK(row.repeats == 1);
  CHECK(row.rmse.mean == result.runs.front().metrics.rmse);
  CHECK(row.rmse.sd == 0.0);
  CHECK((row.completion_rate == 0.0 || row.completion_rate == 1.0));
}

TEST_CASE("grid dimensions must be nonempty") {
  harness::ExperimentGrid grid;
  grid.configs = {};
  CHECK_THROWS_AS(
      (void)harness::run_grid(grid, sim::SimParams{}, fuzzy::ControllerLayout{}),
      std::invalid_argument);
  grid = harness::ExperimentGrid{};
  grid.repeats = 0;
  CHECK_THROWS_AS(
      (void)harness::run_grid(grid, sim::SimParams{}, fuzzy::ControllerLayout{}),
      std::invalid_argument);
}

TEST_CASE("a cell run alone matches the same cell inside a larger grid") {
  auto wide = tiny_grid();
  wide.courses = {25, 50};
  const auto full =
      harness::run_grid(wide, sim::SimParams{}, fuzzy::ControllerLayout{}, 2);

  harness::ExperimentGrid narrow;
  narrow.courses = {50};
  narrow.configs = {'I'};
  narrow.fou_sizes = {10};
  narrow.repeats = 2;
  const auto alone =
      harness::run_grid(narrow, sim::SimParams{}, fuzzy::ControllerLayout{}, 1);

  for (const auto& run : alone.runs) {
    const auto match = std::find_if(
        full.runs.begin(), full.runs.end(), [&run](const harness::RunResult& r) {
          return r.course == run.course && r.config == run.config &&
                 r.fou == run.fou && r.repeat == run.repeat;
        });
    REQUIRE(match != full.runs.end());
    CHECK(match->seed == run.seed);
    CHECK(match->metrics.rmse == run.metrics.rmse);
    CHECK(match->metrics.rel_perf == run.metrics.rel_perf);
  }
}

TEST_CASE("grid reruns and thread counts leave the summary untouched") {
  const auto grid = tiny_grid();
  const auto one = harness::run_grid(grid, sim::SimParams{}, fuzzy::ControllerLayout{}, 1);
  const auto two = harness::run_grid(grid, sim::SimParams{}, fuzzy::ControllerLayout{}, 1);
  const auto pooled =
      harness::run_grid(grid, sim::SimParams{}, fuzzy::ControllerLayout{}, 4);
  CHECK(rows_as_csv(one.rows) == rows_as_csv(two.rows));
  CHECK(rows_as_csv(one.rows) == rows_as_csv(pooled.rows));
}

TEST_CASE("summary means stay inside the per-run extremes") {
  const auto result =
      harness::run_grid(tiny_grid(), sim::SimParams{}, fuzzy::ControllerLayout{}, 2);
  for (const auto& row : result.rows) {
    double lo = 1e300, hi = -1e300;
    for (const auto& run : result.runs) {
      if (run.course != row.course || run.config != row.config || run.fou != row.fou)
        continue;
      lo = std::min(lo, run.metrics.rmse);
      hi = std::max(hi, run.metrics.rmse);
    }
    CHECK(row.rmse.mean >= lo);
    CHECK(row.rmse.mean <= hi);
  }
}

TEST_CASE("summary files carry the exact schema and a normalized sibling") {
  TempDir tmp("sailperf_test_summary");
  const auto result =
      harness::run_grid(tiny_grid(), sim::SimParams{}, fuzzy::ControllerLayout{}, 2);
  harness::emit_summary(result.rows, tmp.path);

  std::ifstream raw(tmp.path / "summary" / "25_10.csv");
  REQUIRE(raw.good());
  std::string header;
  std::getline(raw, header);
  CHECK(header == harness::kSummaryHeader);
  int lines = 0;
  for (std::string line; std::getline(raw, line);) {
    if (!line.empty()) ++lines;
  }
  CHECK(lines == 2);  // configs A and I

  std::ifstream norm(tmp.path / "summary" / "25_10_norm.csv");
  REQUIRE(norm.good());
  std::getline(norm, header);
  CHECK(header == "course,config,fou,norm_rmse,norm_um,norm_bd,norm_rp");
  // with two rows every normalized column is {0,1} in some order
  std::vector<std::string> body;
  for (std::string line; std::getline(norm, line);) {
    if (!line.empty()) body.push_back(line);
  }
  REQUIRE(body.size() == 2);
  CHECK(body[0].substr(0, 5) == "25,A,");
  CHECK(body[1].substr(0, 5) == "25,I,");

  CHECK(fs::exists(tmp.path / "summary" / "25_0.md"));
  CHECK_THROWS_AS(harness::emit_summary({}, tmp.path), std::invalid_argument);
}

TEST_CASE("wind figure series lists configurations in label order") {
  TempDir tmp("sailperf_test_wind_fig");
  const auto result =
      harness::run_grid(tiny_grid(), sim::SimParams{}, fuzzy::ControllerLayout{}, 2);
  harness::emit_wind_figures(result.runs, tmp.path);

  std::ifstream in(tmp.path / "wind" / "sigma_series.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == "config,mean_sd_dir,mean_sd_speed");
  std::getline(in, line);
  CHECK(line.substr(0, 2) == "A,");
  std::getline(in, line);
  CHECK(line.substr(0, 2) == "I,");
}

TEST_CASE("figure panels hold one column per FOU size, normalized to [0,1]") {
  TempDir tmp("sailperf_test_panels");
  auto grid = tiny_grid();
  grid.configs = {'A', 'E', 'I'};
  const auto result =
      harness::run_grid(grid, sim::SimParams{}, fuzzy::ControllerLayout{}, 2);
  harness::emit_normalized_panels(result.rows, tmp.path);

  std::ifstream in(tmp.path / "figures" / "25_rp_norm.csv");
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "config,fou_0,fou_10");
  double column_min = 2.0, column_max = -1.0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');  // label
    std::getline(row, cell, ',');
    const double v = std::stod(cell);
    column_min = std::min(column_min, v);
    column_max = std::max(column_max, v);
  }
  CHECK(column_min == doctest::Approx(0.0));
  CHECK(column_max == doctest::Approx(1.0));
}

TEST_CASE("config files parse with defaults, reject typos and bad types") {
  const auto defaults = config::parse_config("{}");
  CHECK(defaults.grid.courses == std::vector<int>{25, 50, 100});
  CHECK(defaults.grid.repeats == 30);
  CHECK(defaults.grid.base_seed == 1);
  CHECK(defaults.threads == 1);
  CHECK(defaults.params.dt == 0.1);

  const auto cfg = config::parse_config(R"({
    "grid": {"courses": [50], "configs": "AI", "fou_sizes": [0, 20], "repeats": 3,
             "base_seed": 9, "paired_wind_seeds": false},
    "sim": {"dt": 0.2, "timeout_s": 120, "polar": [[0, 0], [90, 0.6], [180, 0.4]]},
    "wind": {"jitter_dir_deg": 2.5},
    "fuzzy": {"half_width": 40, "singletons": [-40, -20, 0, 20, 40]},
    "output": {"out_dir": "elsewhere", "threads": 3, "write_logs": true}
  })");
  CHECK(cfg.grid.courses == std::vector<int>{50});
  CHECK(cfg.grid.configs == std::vector<char>{'A', 'I'});
  CHECK(cfg.grid.repeats == 3);
  CHECK(cfg.grid.base_seed == 9);
  CHECK_FALSE(cfg.grid.paired_wind_seeds);
  CHECK(cfg.params.dt == 0.2);
  CHECK(cfg.params.polar.size() == 3);
  CHECK(cfg.params.wind.jitter_dir_deg == 2.5);
  CHECK(cfg.layout.half_width == 40.0);
  CHECK(cfg.layout.singletons[1] == -20.0);
  CHECK(cfg.out_dir == fs::path("elsewhere"));
  CHECK(cfg.threads == 3);
  CHECK(cfg.write_logs);

  CHECK_THROWS_WITH_AS((void)config::parse_config(R"({"grid": {"course": [25]}})"),
                       doctest::Contains("unknown key"), std::runtime_error);
  CHECK_THROWS_AS((void)config::parse_config(R"({"grid": {"repeats": "many"}})"),
                  std::runtime_error);
  CHECK_THROWS_AS((void)config::parse_config("not json"), std::runtime_error);
  CHECK_THROWS_AS((void)config::parse_config(R"({"grid": {"configs": "AZ"}})"),
                  std::invalid_argument);
}

TEST_CASE("cli: a filtered run prints its summary row and writes the tree") {
  TempDir tmp("sailperf_test_cli_run");
  std::string out;
  const int code = run_cli({"run", "--course", "50", "--config", "I", "--fou", "10",
                            "--repeats", "2", "--seed", "7", "--out-dir",
                            tmp.path.string()},
                           &out);
  CHECK(code == 0);
  std::istringstream lines(out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == harness::kSummaryHeader);
  CHECK(row.substr(0, 8) == "50,I,10,");
  CHECK(fs::exists(tmp.path / "summary" / "50_10.csv"));
  CHECK(fs::exists(tmp.path / "wind" / "sigma_series.csv"));
  CHECK(fs::exists(tmp.path / "figures" / "50_rp.csv"));
}

TEST_CASE("cli: unknown configuration labels name the valid range") {
  std::string out, err;
  const int code = run_cli({"run", "--config", "Z"}, &out, &err);
  CHECK(code != 0);
  CHECK(err.find("A") != std::string::npos);
  CHECK(err.find("I") != std::string::npos);
}

TEST_CASE("cli: single dumps one run log on stdout with a uniform time base") {
  std::string out;
  const int code = run_cli(
      {"single", "--config", "A", "--fou", "0", "--course", "25", "--seed", "1"},
      &out);
  CHECK(code == 0);
  std::istringstream lines(out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == csvio::kRunLogHeader);
  std::getline(lines, line);
  CHECK(line.substr(0, 2) == "0,");
  std::getline(lines, line);
  CHECK(line.substr(0, 4) == "0.1,");
}

TEST_CASE("cli: report rebuilds identical summary rows from stored logs") {
  TempDir tmp("sailperf_test_cli_report");
  std::string run_out;
  REQUIRE(run_cli({"run", "--course", "25", "--config", "B", "--fou", "0", "--fou",
                   "10", "--repeats", "2", "--seed", "5", "--write-logs",
                   "--out-dir", tmp.path.string()},
                  &run_out) == 0);
  std::string report_out;
  REQUIRE(run_cli({"report", "--out-dir", tmp.path.string()}, &report_out) == 0);

  auto csv_part = [](const std::string& text) {
    std::istringstream lines(text);
    std::string acc, line;
    while (std::getline(lines, line)) {
      if (!line.empty() && line[0] != '#') acc += line + "\n";
    }
    return acc;
  };
  CHECK(csv_part(run_out) == csv_part(report_out));
}

TEST_CASE("cli: windcheck emits one deviation row per requested label") {
  std::string out;
  const int code = run_cli({"windcheck", "--config", "A", "--config", "C",
                            "--repeats", "2", "--duration", "60"},
                           &out);
  CHECK(code == 0);
  std::istringstream lines(out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "config,mean_sd_dir,mean_sd_speed");
  std::getline(lines, line);
  REQUIRE(line.substr(0, 2) == "A,");
  const double calm = std::stod(line.substr(2));
  std::getline(lines, line);
  REQUIRE(line.substr(0, 2) == "C,");
  const double variable = std::stod(line.substr(2));
  CHECK(variable > calm);
}

TEST_CASE("cli: parameter files apply and flags override them") {
  TempDir tmp("sailperf_test_cli_params");
  const fs::path cfg_path = tmp.path / "params.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"grid": {"courses": [25], "configs": "AB", "fou_sizes": [0],
               "repeats": 2},
               "output": {"out_dir": ")"
        << (tmp.path / "from_file").string() << R"("}})";
  }
  std::string out;
  REQUIRE(run_cli({"run", "--params", cfg_path.string()}, &out) == 0);
  CHECK(out.find("25,A,0,") != std::string::npos);
  CHECK(out.find("25,B,0,") != std::string::npos);
  CHECK(fs::exists(tmp.path / "from_file" / "summary" / "25_0.csv"));

  std::string narrowed;
  REQUIRE(run_cli({"run", "--params", cfg_path.string(), "--config", "I",
                   "--out-dir", (tmp.path / "override").string()},
                  &narrowed) == 0);
  CHECK(narrowed.find("25,I,0,") != std::string::npos);
  CHECK(narrowed.find("25,A,0,") == std::string::npos);
  CHECK(fs::exists(tmp.path / "override" / "summary" / "25_0.csv"));

  std::string err;
  const fs::path bad_path = tmp.path / "bad.json";
  std::ofstream(bad_path) << R"({"simulation": {}})";
  CHECK(run_cli({"run", "--params", bad_path.string()}, nullptr, &err) != 0);
  CHECK(err.find("unknown key") != std::string::npos);
}

TEST_CASE("cli: missing subcommand or flag values fail with a diagnostic") {
  std::string err;
  CHECK(run_cli({}, nullptr, &err) != 0);
  err.clear();
  CHECK(run_cli({"run", "--course"}, nullptr, &err) != 0);
  CHECK_FALSE(err.empty());
  err.clear();
  CHECK(run_cli({"voyage"}, nullptr, &err) != 0);
}
