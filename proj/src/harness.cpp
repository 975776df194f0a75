#include "sailperf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>

#include "sailperf/csv.hpp"
#include "sailperf/rng.hpp"

namespace sailperf::harness {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  return out;
}

Aggregate aggregate(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

void validate(const ExperimentGrid& grid) {
  if (grid.courses.empty() || grid.configs.empty() || grid.fou_sizes.empty()) {
    throw std::invalid_argument("experiment grid has an empty dimension");
  }
  if (grid.repeats < 1) {
    throw std::invalid_argument("experiment grid needs repeats >= 1");
  }
}

// Short fixed-precision rendering for the markdown reports; the CSVs keep
// full round-trip precision.
std::string pretty(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::uint64_t run_seed(const ExperimentGrid& grid, int course, char config,
                       int fou, int repeat) {
  std::uint64_t h = 0;
  h = hash_combine(h, static_cast<std::uint64_t>(course));
  h = hash_combine(h, static_cast<std::uint64_t>(config));
  h = hash_combine(h, static_cast<std::uint64_t>(grid.paired_wind_seeds ? 0 : fou));
  h = hash_combine(h, static_cast<std::uint64_t>(repeat));
  return grid.base_seed ^ h;
}

GridResult run_grid(const ExperimentGrid& grid, const sim::SimParams& params,
                    const fuzzy::ControllerLayout& layout, int threads,
                    const RunSink& sink) {
  validate(grid);

  struct Task {
    int course;
    char config;
    int fou;
    int repeat;
  };
  std::vector<Task> tasks;
  tasks.reserve(grid.courses.size() * grid.configs.size() *
                grid.fou_sizes.size() * static_cast<std::size_t>(grid.repeats));
  for (int course : grid.courses) {
    for (char config : grid.configs) {
      for (int fou : grid.fou_sizes) {
        for (int repeat = 0; repeat < grid.repeats; ++repeat) {
          tasks.push_back({course, config, fou, repeat});
        }
      }
    }
  }

  // Rule bases and courses are shared read-only across the pool.
  std::map<int, fuzzy::RuleBase> rule_bases;
  for (int fou : grid.fou_sizes) {
    rule_bases.emplace(fou, fuzzy::make_rule_base(layout, fou));
  }
  std::map<int, std::pair<sim::Course, double>> courses;
  for (int course : grid.courses) {
    sim::Course c = sim::course_from_offset(course, params.single_leg);
    double bearing = sim::course_bearing(c);
    courses.emplace(course, std::make_pair(std::move(c), bearing));
  }
  std::map<char, wind::WindConfig> configs;
  for (char label : grid.configs) {
    configs.emplace(label, wind::config_from_label(label));
  }

  GridResult result;
  result.runs.resize(tasks.size());

  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        const Task& task = tasks[i];
        const auto& [course, bearing] = courses.at(task.course);
        const std::uint64_t seed =
            run_seed(grid, task.course, task.config, task.fou, task.repeat);
        sim::RunLog log = sim::run_simulation(
            rule_bases.at(task.fou), course, configs.at(task.config), params, seed);

        RunResult& run = result.runs[i];
        run.course = task.course;
        run.config = task.config;
        run.fou = task.fou;
        run.repeat = task.repeat;
        run.seed = seed;
        run.metrics = metrics::compute_metrics(log, bearing);
        run.outcome = log.outcome;
        run.steps = log.records.size();
        if (sink) {
          std::lock_guard<std::mutex> lock(sink_mutex);
          sink(run, log);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int pool = std::max(1, threads);
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(pool));
    for (int i = 0; i < pool; ++i) workers.emplace_back(worker);
    for (auto& w : workers) w.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  result.rows = summarize(result.runs);
  return result;
}

std::vector<SummaryRow> summarize(std::span<const RunResult> runs) {
  if (runs.empty()) {
    throw std::invalid_argument("summarize: no runs");
  }
  std::map<std::tuple<int, char, int>, std::vector<const RunResult*>> cells;
  for (const RunResult& run : runs) {
    cells[{run.course, run.config, run.fou}].push_back(&run);
  }
  std::vector<SummaryRow> rows;
  rows.reserve(cells.size());
  for (const auto& [key, cell] : cells) {
    std::vector<double> rmse, um, bd, rp;
    int completed = 0;
    for (const RunResult* run : cell) {
      rmse.push_back(run->metrics.rmse);
      um.push_back(run->metrics.uncertainty_measure);
      bd.push_back(run->metrics.base_difficulty);
      rp.push_back(run->metrics.rel_perf);
      if (run->outcome == sim::Outcome::kCompleted) ++completed;
    }
    SummaryRow row;
    std::tie(row.course, row.config, row.fou) = key;
    row.repeats = static_cast<int>(cell.size());
    row.rmse = aggregate(rmse);
    row.um = aggregate(um);
    row.bd = aggregate(bd);
    row.rp = aggregate(rp);
    row.completion_rate =
        static_cast<double>(completed) / static_cast<double>(cell.size());
    rows.push_back(row);
  }
  return rows;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << kSummaryHeader << "\n";
  for (const SummaryRow& row : rows) {
    out << row.course << ',' << row.config << ',' << row.fou << ','
        << csvio::format_double(row.rmse.mean) << ','
        << csvio::format_double(row.rmse.sd) << ','
        << csvio::format_double(row.um.mean) << ','
        << csvio::format_double(row.um.sd) << ','
        << csvio::format_double(row.bd.mean) << ','
        << csvio::format_double(row.bd.sd) << ','
        << csvio::format_double(row.rp.mean) << ','
        << csvio::format_double(row.rp.sd) << ','
        << csvio::format_double(row.completion_rate) << "\n";
  }
}

void emit_summary(std::span<const SummaryRow> rows,
                  const std::filesystem::path& out_dir,
                  bool normalized_markdown) {
  if (rows.empty()) {
    throw std::invalid_argument("emit_summary: no rows");
  }
  std::map<std::pair<int, int>, std::vector<SummaryRow>> tables;
  for (const SummaryRow& row : rows) {
    tables[{row.course, row.fou}].push_back(row);
  }
  for (auto& [key, table] : tables) {
    std::sort(table.begin(), table.end(),
              [](const SummaryRow& a, const SummaryRow& b) {
                return a.config < b.config;
              });
    const auto [course, fou] = key;
    const std::string stem =
        std::to_string(course) + "_" + std::to_string(fou);
    const std::filesystem::path dir = out_dir / "summary";

    {
      std::ofstream out = open_out(dir / (stem + ".csv"));
      write_summary_csv(out, table);
    }

    std::vector<double> rmse, um, bd, rp;
    for (const SummaryRow& row : table) {
      rmse.push_back(row.rmse.mean);
      um.push_back(row.um.mean);
      bd.push_back(row.bd.mean);
      rp.push_back(row.rp.mean);
    }
    const auto n_rmse = metrics::normalize_series(rmse);
    const auto n_um = metrics::normalize_series(um);
    const auto n_bd = metrics::normalize_series(bd);
    const auto n_rp = metrics::normalize_series(rp);

    {
      std::ofstream out = open_out(dir / (stem + "_norm.csv"));
      out << "course,config,fou,norm_rmse,norm_um,norm_bd,norm_rp\n";
      for (std::size_t i = 0; i < table.size(); ++i) {
        out << table[i].course << ',' << table[i].config << ','
            << table[i].fou << ',' << csvio::format_double(n_rmse[i]) << ','
            << csvio::format_double(n_um[i]) << ','
            << csvio::format_double(n_bd[i]) << ','
            << csvio::format_double(n_rp[i]) << "\n";
      }
    }

    {
      std::ofstream out = open_out(dir / (stem + ".md"));
      out << "Course " << course << " m, FOU " << fou;
      if (normalized_markdown) out << " (column-normalized)";
      out << "\n\n";
      out << "| Wind Config. | Uncertainty Measure | Perf_Absolute | "
             "Base Difficulty | Perf_Relative |\n";
      out << "| --- | --- | --- | --- | --- |\n";
      for (std::size_t i = 0; i < table.size(); ++i) {
        if (normalized_markdown) {
          out << "| " << table[i].config << " | " << pretty(n_um[i]) << " | "
              << pretty(n_rmse[i]) << " | " << pretty(n_bd[i]) << " | "
              << pretty(n_rp[i]) << " |\n";
        } else {
          out << "| " << table[i].config << " | " << pretty(table[i].um.mean)
              << " | " << pretty(table[i].rmse.mean) << " | "
              << pretty(table[i].bd.mean) << " | "
              << pretty(table[i].rp.mean) << " |\n";
        }
      }
    }
  }
}

void emit_wind_figures(std::span<const RunResult> runs,
                       const std::filesystem::path& out_dir) {
  if (runs.empty()) {
    throw std::invalid_argument("emit_wind_figures: no runs");
  }
  std::map<char, std::pair<std::vector<double>, std::vector<double>>> by_config;
  for (const RunResult& run : runs) {
    auto& [dirs, speeds] = by_config[run.config];
    dirs.push_back(run.metrics.sd_dir);
    speeds.push_back(run.metrics.sd_speed);
  }
  std::ofstream out = open_out(out_dir / "wind" / "sigma_series.csv");
  out << "config,mean_sd_dir,mean_sd_speed\n";
  for (const auto& [config, series] : by_config) {
    out << config << ',' << csvio::format_double(aggregate(series.first).mean)
        << ',' << csvio::format_double(aggregate(series.second).mean) << "\n";
  }
}

void emit_normalized_panels(std::span<const SummaryRow> rows,
                            const std::filesystem::path& out_dir) {
  if (rows.empty()) {
    throw std::invalid_argument("emit_normalized_panels: no rows");
  }
  // panel[course][metric]: config rows x fou columns of cell means.
  std::map<int, std::vector<const SummaryRow*>> by_course;
  for (const SummaryRow& row : rows) by_course[row.course].push_back(&row);

  const std::array<const char*, 3> metric_names{"rmse", "um", "rp"};
  for (const auto& [course, course_rows] : by_course) {
    std::vector<char> configs;
    std::vector<int> fous;
    for (const SummaryRow* row : course_rows) {
      if (std::find(configs.begin(), configs.end(), row->config) == configs.end())
        configs.push_back(row->config);
      if (std::find(fous.begin(), fous.end(), row->fou) == fous.end())
        fous.push_back(row->fou);
    }
    std::sort(configs.begin(), configs.end());
    std::sort(fous.begin(), fous.end());

    auto cell_mean = [&](char config, int fou, int metric) {
      for (const SummaryRow* row : course_rows) {
        if (row->config == config && row->fou == fou) {
          switch (metric) {
            case 0: return row->rmse.mean;
            case 1: return row->um.mean;
            default: return row->rp.mean;
          }
        }
      }
      throw std::invalid_argument("emit_normalized_panels: grid is ragged");
    };

    for (int metric = 0; metric < 3; ++metric) {
      const std::string stem =
          std::to_string(course) + "_" + metric_names[static_cast<std::size_t>(metric)];
      // raw panel + per-fou-column min-max normalized panel
      std::vector<std::vector<double>> columns;
      for (int fou : fous) {
        std::vector<double> column;
        for (char config : configs) column.push_back(cell_mean(config, fou, metric));
        columns.push_back(std::move(column));
      }
      std::vector<std::vector<double>> norm_columns;
      for (const auto& column : columns) {
        norm_columns.push_back(metrics::normalize_series(column));
      }

      auto write_panel = [&](const std::filesystem::path& path,
                             const std::vector<std::vector<double>>& cols) {
        std::ofstream out = open_out(path);
        out << "config";
        for (int fou : fous) out << ",fou_" << fou;
        out << "\n";
        for (std::size_t i = 0; i < configs.size(); ++i) {
          out << configs[i];
          for (const auto& column : cols) out << ',' << csvio::format_double(column[i]);
          out << "\n";
        }
      };
      write_panel(out_dir / "figures" / (stem + ".csv"), columns);
      write_panel(out_dir / "figures" / (stem + "_norm.csv"), norm_columns);
    }
  }
}

}  // namespace sailperf::harness
