#include "sailperf/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sailperf/wind.hpp"

namespace sailperf::config {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const char* where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::runtime_error("unknown key \"" + item.key() + "\" in " + where);
    }
  }
}

std::vector<char> parse_labels(const json& value) {
  std::vector<char> labels;
  if (value.is_string()) {
    for (char c : value.get<std::string>()) labels.push_back(c);
  } else if (value.is_array()) {
    for (const auto& item : value) {
      const auto s = item.get<std::string>();
      if (s.size() != 1) {
        throw std::runtime_error("config labels must be single characters");
      }
      labels.push_back(s[0]);
    }
  } else {
    throw std::runtime_error("\"configs\" must be a string or array of labels");
  }
  for (char label : labels) wind::config_from_label(label);  // validates
  return labels;
}

template <std::size_t N>
std::array<double, N> parse_fixed(const json& value, const char* name) {
  if (!value.is_array() || value.size() != N) {
    throw std::runtime_error(std::string("\"") + name + "\" must be an array of " +
                             std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = value[i].get<double>();
  return out;
}

void apply_grid(const json& section, harness::ExperimentGrid& grid) {
  check_keys(section, "\"grid\"",
             {"courses", "configs", "fou_sizes", "repeats", "base_seed",
              "paired_wind_seeds"});
  if (section.contains("courses"))
    grid.courses = section["courses"].get<std::vector<int>>();
  if (section.contains("configs")) grid.configs = parse_labels(section["configs"]);
  if (section.contains("fou_sizes"))
    grid.fou_sizes = section["fou_sizes"].get<std::vector<int>>();
  grid.repeats = section.value("repeats", grid.repeats);
  grid.base_seed = section.value("base_seed", grid.base_seed);
  grid.paired_wind_seeds = section.value("paired_wind_seeds", grid.paired_wind_seeds);
}

void apply_sim(const json& section, sim::SimParams& params) {
  check_keys(section, "\"sim\"",
             {"dt", "timeout_s", "arrival_radius_m", "rudder_limit",
              "turn_gain", "initial_heading", "single_leg", "polar"});
  params.dt = section.value("dt", params.dt);
  params.timeout_s = section.value("timeout_s", params.timeout_s);
  params.arrival_radius_m = section.value("arrival_radius_m", params.arrival_radius_m);
  params.rudder_limit = section.value("rudder_limit", params.rudder_limit);
  params.turn_gain = section.value("turn_gain", params.turn_gain);
  params.initial_heading = section.value("initial_heading", params.initial_heading);
  params.single_leg = section.value("single_leg", params.single_leg);
  if (section.contains("polar")) {
    std::vector<sim::PolarPoint> polar;
    for (const auto& pair : section["polar"]) {
      if (!pair.is_array() || pair.size() != 2) {
        throw std::runtime_error("\"polar\" entries must be [angle, fraction] pairs");
      }
      polar.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    params.polar = std::move(polar);
  }
}

void apply_wind(const json& section, wind::WindParams& wind) {
  check_keys(section, "\"wind\"",
             {"period_s", "jitter_dir_deg", "jitter_speed_ms",
              "jitter_clamp_sigmas"});
  wind.period_s = section.value("period_s", wind.period_s);
  wind.jitter_dir_deg = section.value("jitter_dir_deg", wind.jitter_dir_deg);
  wind.jitter_speed_ms = section.value("jitter_speed_ms", wind.jitter_speed_ms);
  wind.jitter_clamp_sigmas =
      section.value("jitter_clamp_sigmas", wind.jitter_clamp_sigmas);
}

void apply_fuzzy(const json& section, fuzzy::ControllerLayout& layout) {
  check_keys(section, "\"fuzzy\"",
             {"input_apexes", "half_width", "singletons", "consequents"});
  if (section.contains("input_apexes"))
    layout.input_apexes = parse_fixed<5>(section["input_apexes"], "input_apexes");
  layout.half_width = section.value("half_width", layout.half_width);
  if (section.contains("singletons"))
    layout.singletons = parse_fixed<5>(section["singletons"], "singletons");
  if (section.contains("consequents")) {
    const json& grid = section["consequents"];
    if (!grid.is_array() || grid.size() != 5) {
      throw std::runtime_error("\"consequents\" must be a 5x5 array of indices");
    }
    std::array<std::array<int, 5>, 5> table{};
    for (std::size_t i = 0; i < 5; ++i) {
      if (!grid[i].is_array() || grid[i].size() != 5) {
        throw std::runtime_error("\"consequents\" must be a 5x5 array of indices");
      }
      for (std::size_t j = 0; j < 5; ++j) table[i][j] = grid[i][j].get<int>();
    }
    layout.consequents = table;
  }
}

void apply_output(const json& section, AppConfig& cfg) {
  check_keys(section, "\"output\"",
             {"out_dir", "threads", "normalized", "write_logs"});
  if (section.contains("out_dir"))
    cfg.out_dir = section["out_dir"].get<std::string>();
  cfg.threads = section.value("threads", cfg.threads);
  cfg.normalized = section.value("normalized", cfg.normalized);
  cfg.write_logs = section.value("write_logs", cfg.write_logs);
}

}  // namespace

AppConfig parse_config(const std::string& text) {
  AppConfig cfg;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw std::runtime_error("config root must be a JSON object");
  }
  check_keys(doc, "config", {"grid", "sim", "wind", "fuzzy", "output"});
  try {
    if (doc.contains("grid")) apply_grid(doc["grid"], cfg.grid);
    if (doc.contains("sim")) apply_sim(doc["sim"], cfg.params);
    if (doc.contains("wind")) apply_wind(doc["wind"], cfg.params.wind);
    if (doc.contains("fuzzy")) apply_fuzzy(doc["fuzzy"], cfg.layout);
    if (doc.contains("output")) apply_output(doc["output"], cfg);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config value has the wrong type: ") +
                             e.what());
  }
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace sailperf::config
