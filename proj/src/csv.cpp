#include "sailperf/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sailperf::csvio {

std::string format_double(double v) {
  char buf[40];
  // %.17g survives a parse round trip; trim to the shortest form that does.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<double> parse_row(const std::string& line, std::size_t expected,
                              const std::filesystem::path& path) {
  std::vector<double> fields;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t pos = 0;
    fields.push_back(std::stod(cell, &pos));
  }
  if (fields.size() != expected) {
    throw std::runtime_error("malformed CSV row in " + path.string());
  }
  return fields;
}

}  // namespace

void write_run_log(std::ostream& out, const sim::RunLog& log) {
  out << kRunLogHeader << '\n';
  for (const auto& r : log.records) {
    out << format_double(r.t) << ',' << format_double(r.desired_bearing) << ','
        << format_double(r.actual_bearing) << ',' << format_double(r.wind.direction)
        << ',' << format_double(r.wind.speed) << ',' << format_double(r.boat.x) << ','
        << format_double(r.boat.y) << ',' << format_double(r.boat.heading) << ','
        << format_double(r.boat.speed) << ',' << format_double(r.rudder) << '\n';
  }
}

void write_run_log(const std::filesystem::path& path, const sim::RunLog& log) {
  auto out = open_out(path);
  write_run_log(out, log);
}

sim::RunLog read_run_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kRunLogHeader) {
    throw std::runtime_error("unexpected run-log header in " + path.string());
  }
  sim::RunLog log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = parse_row(line, 10, path);
    sim::LogRecord rec;
    rec.t = f[0];
    rec.desired_bearing = f[1];
    rec.actual_bearing = f[2];
    rec.wind = {f[0], f[3], f[4]};
    rec.boat = {f[5], f[6], f[7], f[8]};
    rec.rudder = f[9];
    log.records.push_back(rec);
  }
  if (log.records.empty()) {
    throw std::runtime_error("run log " + path.string() + " has no records");
  }
  return log;
}

void write_wind_log(const std::filesystem::path& path,
                    std::span<const wind::WindSample> log) {
  auto out = open_out(path);
  out << kWindLogHeader << '\n';
  for (const auto& w : log) {
    out << format_double(w.t) << ',' << format_double(w.direction) << ','
        << format_double(w.speed) << '\n';
  }
}

}  // namespace sailperf::csvio
