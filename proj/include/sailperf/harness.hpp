#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "sailperf/boat.hpp"
#include "sailperf/metrics.hpp"

namespace sailperf::harness {

/// The experiment sweep: courses x wind configurations x FOU sizes, each
/// cell repeated `repeats` times with independently derived seeds.
/// With paired_wind_seeds (the default) the wind seed depends only on
/// (course, config, repeat), so the same repeat index sees identical wind
/// across FOU sizes and the FOU comparison is paired.
struct ExperimentGrid {
  std::vector<int> courses{25, 50, 100};
  std::vector<char> configs{wind::kConfigLabels.begin(), wind::kConfigLabels.end()};
  std::vector<int> fou_sizes{0, 5, 10, 15, 20, 25};
  int repeats{30};
  std::uint64_t base_seed{1};
  bool paired_wind_seeds{true};
};

/// Stable per-run seed: base_seed xor hash(course, config, fou, repeat), so
/// any single cell reproduces in isolation and execution order is
/// irrelevant. Paired mode drops fou from the hash.
std::uint64_t run_seed(const ExperimentGrid& grid, int course, char config,
                       int fou, int repeat);

struct RunResult {
  int course{};
  char config{};
  int fou{};
  int repeat{};
  std::uint64_t seed{};
  metrics::MetricsRecord metrics{};
  sim::Outcome outcome{sim::Outcome::kTimedOut};
  std::size_t steps{};
};

struct Aggregate {
  double mean{};
  double sd{};  // population
};

struct SummaryRow {
  int course{};
  char config{};
  int fou{};
  int repeats{};
  Aggregate rmse{};
  Aggregate um{};
  Aggregate bd{};
  Aggregate rp{};
  double completion_rate{};
};

struct GridResult {
  std::vector<RunResult> runs;   // grid order: course, config, fou, repeat
  std::vector<SummaryRow> rows;  // one per (course, config, fou) cell
};

/// Called once per finished run, serialized; used to stream logs to disk.
using RunSink = std::function<void(const RunResult&, const sim::RunLog&)>;

/// Groups runs by (course, config, fou) and aggregates each group. Rows
/// come back sorted by course, then config label, then FOU size. Throws
/// std::invalid_argument on an empty run set.
std::vector<SummaryRow> summarize(std::span<const RunResult> runs);

/// Executes the sweep on `threads` workers (<= 1 means sequential). Results
/// and aggregates are ordered by grid position regardless of scheduling, so
/// outputs are deterministic.
GridResult run_grid(const ExperimentGrid& grid, const sim::SimParams& params,
                    const fuzzy::ControllerLayout& layout, int threads = 1,
                    const RunSink& sink = {});

inline constexpr const char* kSummaryHeader =
    "course,config,fou,mean_rmse,sd_rmse,mean_um,sd_um,mean_bd,sd_bd,mean_rp,"
    "sd_rp,completion_rate";

/// Header plus one CSV line per row, in the given order.
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

/// Writes per-(course, fou) summary tables under out_dir/summary/: a raw CSV
/// with the exact kSummaryHeader schema, a min-max-normalized variant
/// (*_norm.csv), and a markdown table (raw values, or normalized when
/// normalized_markdown is set). Rows are ordered by config label. Throws
/// std::invalid_argument on an empty row set.
void emit_summary(std::span<const SummaryRow> rows,
                  const std::filesystem::path& out_dir,
                  bool normalized_markdown = false);

/// Writes out_dir/wind/sigma_series.csv: per-config mean wind standard
/// deviations in A..I order, the series behind the uncertainty-measure
/// inputs.
void emit_wind_figures(std::span<const RunResult> runs,
                       const std::filesystem::path& out_dir);

/// Writes out_dir/figures/{course}_{rmse|um|rp}.csv panels (configs as rows,
/// one column per FOU size) plus *_norm.csv variants with each FOU column
/// scaled to [0, 1].
void emit_normalized_panels(std::span<const SummaryRow> rows,
                            const std::filesystem::path& out_dir);

}  // namespace sailperf::harness
