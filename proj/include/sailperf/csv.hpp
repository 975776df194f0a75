#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "sailperf/boat.hpp"
#include "sailperf/wind.hpp"

namespace sailperf::csvio {

/// Shortest round-trippable textual form; keeps emitted files deterministic.
std::string format_double(double v);

inline constexpr const char* kRunLogHeader =
    "t,desired_bearing,actual_bearing,wind_dir,wind_speed,x,y,heading,speed,rudder";

void write_run_log(std::ostream& out, const sim::RunLog& log);
void write_run_log(const std::filesystem::path& path, const sim::RunLog& log);

/// Parses a run-log CSV written by write_run_log. The outcome is not part
/// of the schema; callers that need it infer completion from the final
/// position. Throws std::runtime_error on malformed input.
sim::RunLog read_run_log(const std::filesystem::path& path);

inline constexpr const char* kWindLogHeader = "t,direction_deg,speed_ms";

void write_wind_log(const std::filesystem::path& path,
                    std::span<const wind::WindSample> log);

}  // namespace sailperf::csvio
