#include "fhvqe/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "fhvqe/error.hpp"
#include "fhvqe/observables.hpp"

namespace fhvqe {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  T v{};
  const auto* end = t.data() + t.size();
  const auto [p, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || p != end) {
    throw ConfigError("bad value for '" + key + "': '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text, int min) {
  const int v = parse_number<int>(key, text);
  if (v < min) {
    throw ConfigError("'" + key + "' must be >= " + std::to_string(min));
  }
  return v;
}

double parse_u(const std::string& key, const std::string& text) {
  const double v = parse_number<double>(key, text);
  if (!std::isfinite(v) || v < 0.0) throw ConfigError("'" + key + "' must be finite and >= 0");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("bad boolean for '" + key + "': '" + text + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::svg: return "svg";
  }
  return "?";
}

std::vector<double> parse_u_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty U grid");
  std::vector<double> grid;
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ConfigError("U range must be start:stop:step");
    const double start = parse_u("u-grid", parts[0]);
    const double stop = parse_u("u-grid", parts[1]);
    const double step = parse_number<double>("u-grid", parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("U range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 10000) throw ConfigError("U range has too many points");
    for (long i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  } else {
    for (const auto& p : split(t, ',')) grid.push_back(parse_u("u-grid", p));
  }
  return grid;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "geometry", "u", "u-grid", "sector", "n-electrons", "levels",
      "diagram-level", "sources", "layers", "variant", "fswap", "restarts",
      "stage1-iters", "stage2-iters", "seed", "workers", "out", "format", "trace"};
  return keys;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "geometry") {
    (void)LatticeGeometry::parse(value);
    geometry = value;
  } else if (key == "u") {
    u = parse_u(key, value);
  } else if (key == "u-grid") {
    u_grid = parse_u_grid(value);
  } else if (key == "sector") {
    const auto parts = split(value, ',');
    if (parts.size() != 2) throw ConfigError("sector must be 'n_up,n_down'");
    sector = std::pair{parse_int(key, parts[0], 0), parse_int(key, parts[1], 0)};
  } else if (key == "n-electrons") {
    n_electrons = parse_int(key, value, 1);
  } else if (key == "levels") {
    levels = parse_int(key, value, 1);
  } else if (key == "diagram-level") {
    diagram_level = parse_int(key, value, 0);
    if (diagram_level != 0 && diagram_level != 2) throw ConfigError("diagram-level must be 0 or 2");
  } else if (key == "sources") {
    if (value != "both" && value != "exact" && value != "vqe") {
      throw ConfigError("sources must be both, exact or vqe");
    }
    sources = value;
  } else if (key == "layers") {
    layers = parse_int(key, value, 1);
  } else if (key == "variant") {
    variant = parse_variant(value);
  } else if (key == "fswap") {
    fswap = parse_bool(key, value);
  } else if (key == "restarts") {
    restarts = parse_int(key, value, 1);
  } else if (key == "stage1-iters") {
    stage1_iters = parse_int(key, value, 1);
  } else if (key == "stage2-iters") {
    stage2_iters = parse_int(key, value, 1);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "workers") {
    workers = parse_int(key, value, 0);
  } else if (key == "out") {
    out = value;
  } else if (key == "format") {
    if (value == "csv") {
      format = OutputFormat::csv;
    } else if (value == "json") {
      format = OutputFormat::json;
    } else if (value == "svg") {
      format = OutputFormat::svg;
    } else {
      throw ConfigError("format must be csv, json or svg");
    }
  } else if (key == "trace") {
    trace = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

LatticeGeometry RunConfig::lattice() const { return LatticeGeometry::parse(geometry); }

AnsatzConfig RunConfig::ansatz() const {
  AnsatzConfig c;
  c.layers = layers;
  c.use_fswap = fswap;
  c.variant = variant;
  return c;
}

OptimizerSchedule RunConfig::schedule() const {
  OptimizerSchedule s;
  s.stage1.max_evaluations = stage1_iters;
  s.stage2.max_iterations = stage2_iters;
  s.restarts = restarts;
  s.seed = seed;
  s.workers = workers;
  return s;
}

std::pair<int, int> RunConfig::resolved_sector() const {
  const int n_sites = lattice().n_sites();
  std::pair<int, int> s;
  if (sector) {
    s = *sector;
    if (n_electrons && s.first + s.second != *n_electrons) {
      throw ConfigError("sector and n-electrons disagree");
    }
  } else {
    const int n = n_electrons.value_or(n_sites);
    s = {(n + 1) / 2, n / 2};
  }
  if (s.first > n_sites || s.second > n_sites) {
    throw ConfigError("sector (" + std::to_string(s.first) + "," + std::to_string(s.second) +
                      ") does not fit " + std::to_string(n_sites) + " sites");
  }
  return s;
}

std::vector<double> RunConfig::resolved_u_grid() const {
  if (!u_grid.empty()) return u_grid;
  if (u) return {*u};
  return default_u_grid();
}

void load_config(std::istream& in, RunConfig& config) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    }
    try {
      config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error& e) {
      throw ConfigError("config line " + std::to_string(number) + ": " + e.what());
    }
  }
}

void load_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  load_config(in, config);
}

}  // namespace fhvqe
