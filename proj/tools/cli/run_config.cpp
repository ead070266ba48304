#include "cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace scaledyn::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) throw ConfigError("invalid number for " + key + ": '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("invalid integer for " + key + ": '" + text + "'");
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string to_string(GridKind kind) { return kind == GridKind::log ? "log" : "linear"; }
std::string to_string(OutputFormat format) { return format == OutputFormat::json ? "json" : "csv"; }

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "gm") {
    c.gm = parse_real(key, value);
  } else if (key == "mass") {
    c.mass = parse_real(key, value);
  } else if (key == "lambda") {
    c.lambda_scale = parse_real(key, value);
  } else if (key == "kconst") {
    if (value == "auto")
      c.kconst.reset();
    else
      c.kconst = parse_real(key, value);
  } else if (key == "eta") {
    if (value == "-1")
      c.eta = -1;
    else if (value == "1" || value == "+1")
      c.eta = 1;
    else
      throw ConfigError("eta must be +1 or -1, got '" + value + "'");
  } else if (key == "rmin") {
    c.r_min = parse_real(key, value);
  } else if (key == "rmax") {
    c.r_max = parse_real(key, value);
  } else if (key == "samples") {
    c.samples = parse_int(key, value);
  } else if (key == "grid") {
    if (value == "log")
      c.grid = GridKind::log;
    else if (value == "linear")
      c.grid = GridKind::linear;
    else
      throw ConfigError("grid must be linear or log, got '" + value + "'");
  } else if (key == "format") {
    if (value == "csv")
      c.format = OutputFormat::csv;
    else if (value == "json")
      c.format = OutputFormat::json;
    else
      throw ConfigError("format must be csv or json, got '" + value + "'");
  } else if (key == "output") {
    c.output = value;
  } else if (key == "plot") {
    c.plot = value;
  } else if (key == "energy_factor") {
    c.energy_factor = parse_real(key, value);
  } else if (key == "c1") {
    if (value == "auto")
      c.c1.reset();
    else
      c.c1 = parse_real(key, value);
  } else if (key == "c2") {
    c.c2 = parse_real(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void apply_config_text(RunConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + " is not key=value");
    apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_text(config, text.str());
}

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  out << "gm = " << format_double(c.gm) << '\n'
      << "mass = " << format_double(c.mass) << '\n'
      << "lambda = " << format_double(c.lambda_scale) << '\n'
      << "kconst = " << (c.kconst ? format_double(*c.kconst) : "auto") << '\n'
      << "eta = " << (c.eta > 0 ? "+1" : "-1") << '\n'
      << "rmin = " << format_double(c.r_min) << '\n'
      << "rmax = " << format_double(c.r_max) << '\n'
      << "samples = " << c.samples << '\n'
      << "grid = " << to_string(c.grid) << '\n'
      << "format = " << to_string(c.format) << '\n'
      << "output = " << c.output << '\n'
      << "plot = " << c.plot << '\n'
      << "energy_factor = " << format_double(c.energy_factor) << '\n'
      << "c1 = " << (c.c1 ? format_double(*c.c1) : "auto") << '\n'
      << "c2 = " << format_double(c.c2) << '\n';
  return out.str();
}

void validate(const RunConfig& c) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(c.gm > 0.0) || !finite(c.gm)) throw ConfigError("gm must be positive");
  if (!(c.mass > 0.0) || !finite(c.mass)) throw ConfigError("mass must be positive");
  if (c.lambda_scale == 0.0 || !finite(c.lambda_scale)) throw ConfigError("lambda must be finite and nonzero");
  if (c.kconst && (*c.kconst == 0.0 || !finite(*c.kconst))) throw ConfigError("kconst must be finite and nonzero");
  if (c.eta != 1 && c.eta != -1) throw ConfigError("eta must be +1 or -1");
  if (!(c.r_min > 0.0) || !finite(c.r_min)) throw ConfigError("rmin must be positive");
  if (!(c.r_max > 0.0) || !finite(c.r_max)) throw ConfigError("rmax must be positive");
  if (!(c.r_min < c.r_max)) throw ConfigError("rmin must be smaller than rmax");
  if (c.samples < 1) throw ConfigError("samples must be at least 1");
  if (!finite(c.energy_factor)) throw ConfigError("energy_factor must be finite");
}

std::vector<double> make_grid(const RunConfig& c) {
  std::vector<double> grid(static_cast<std::size_t>(c.samples));
  if (c.samples == 1) {
    grid[0] = c.r_min;
    return grid;
  }
  const double n = c.samples - 1;
  for (int i = 0; i < c.samples; ++i) {
    const double f = i / n;
    grid[i] = c.grid == GridKind::log ? c.r_min * std::pow(c.r_max / c.r_min, f) : c.r_min + (c.r_max - c.r_min) * f;
  }
  grid.back() = c.r_max;
  return grid;
}

}  // namespace scaledyn::cli
