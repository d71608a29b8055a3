#include "wavekin/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "wavekin/error.hpp"

namespace wavekin::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw InvalidConfiguration(key + ": expected a finite number, got '" + v + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw InvalidConfiguration(key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidConfiguration(key + ": expected true or false, got '" + v + "'");
}

}  // namespace

const char* to_string(GridKind kind) {
  return kind == GridKind::geometric ? "geometric" : "uniform";
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void SimulationConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw InvalidConfiguration(msg);
  };
  need(theta >= 0, "theta: degree of homogeneity must be non-negative");
  need(gamma >= 0, "gamma: degree of homogeneity must be non-negative");
  need(delta >= 0, "delta: degree of homogeneity must be non-negative");
  need(R > 0 && std::isfinite(R), "R: truncation radius must be positive");
  need(cells >= 1, "cells: need at least one cell");
  need(cells <= 1 << 16, "cells: at most 65536 cells");
  need(dt > 0 && std::isfinite(dt), "dt: time step must be positive");
  need(tmax >= 0 && std::isfinite(tmax), "tmax: final time must be non-negative");
  need(snapshot_every >= 1, "snapshot_every: stride must be at least 1");
  need(levels >= 2, "levels: a convergence table needs at least two rows");
  need(!name.empty() && name.find_first_of("/\\") == std::string::npos,
       "name: must be a non-empty plain file name");
  need(ic == "test1" || ic == "test2" || (ic.rfind("file:", 0) == 0 && ic.size() > 5),
       "ic: expected test1, test2 or file:PATH");
  const double steps = std::round(tmax / dt);
  need(std::abs(steps * dt - tmax) <= 1e-9 * std::max(1.0, tmax),
       "tmax: must be an integer multiple of dt");
  if (grid == GridKind::geometric) {
    need(std::isfinite(xi_min) && std::isfinite(xi_max) && xi_min < xi_max,
         "xi_min: must be below xi_max");
    need(std::abs(std::exp(xi_max) - R) <= 1e-12 * R,
         "xi_max: exp(xi_max) = " + format_double(std::exp(xi_max)) + " does not match R = " +
             format_double(R));
  }
}

KernelSpec<double> SimulationConfig::kernels() const {
  KernelSpec<double> k{theta, gamma, delta, R};
  k.truncate_loss = !outflow;
  return k;
}

TimeConfig<double> SimulationConfig::time() const { return {dt, tmax, snapshot_every}; }

std::shared_ptr<const Grid<double>> SimulationConfig::make_grid(std::int64_t cell_count) const {
  const Index n = cell_count > 0 ? cell_count : cells;
  if (grid == GridKind::geometric) {
    return std::make_shared<const Grid<double>>(build_geometric_grid(xi_min, xi_max, n));
  }
  return std::make_shared<const Grid<double>>(build_uniform_grid(R, n));
}

void set_field(SimulationConfig& c, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "name") {
    c.name = v;
  } else if (key == "scheme") {
    const auto s = scheme_from_string(v);
    if (!s) throw InvalidConfiguration("scheme: expected plain or weighted, got '" + v + "'");
    c.scheme = *s;
  } else if (key == "theta") {
    c.theta = parse_double(key, v);
  } else if (key == "gamma") {
    c.gamma = parse_double(key, v);
  } else if (key == "delta") {
    c.delta = parse_double(key, v);
  } else if (key == "R") {
    c.R = parse_double(key, v);
  } else if (key == "grid") {
    if (v == "uniform") {
      c.grid = GridKind::uniform;
    } else if (v == "geometric") {
      c.grid = GridKind::geometric;
    } else {
      throw InvalidConfiguration("grid: expected uniform or geometric, got '" + v + "'");
    }
  } else if (key == "xi_min") {
    c.xi_min = parse_double(key, v);
  } else if (key == "xi_max") {
    c.xi_max = parse_double(key, v);
  } else if (key == "cells") {
    c.cells = parse_int(key, v);
  } else if (key == "dt") {
    c.dt = parse_double(key, v);
  } else if (key == "tmax") {
    c.tmax = parse_double(key, v);
  } else if (key == "ic") {
    c.ic = v;
  } else if (key == "snapshot_every") {
    c.snapshot_every = parse_int(key, v);
  } else if (key == "out") {
    c.out = v;
  } else if (key == "strict_negativity") {
    c.strict_negativity = parse_bool(key, v);
  } else if (key == "outflow") {
    c.outflow = parse_bool(key, v);
  } else if (key == "projection") {
    const auto p = projection_from_string(v);
    if (!p) throw InvalidConfiguration("projection: expected midpoint or cell_average, got '" + v + "'");
    c.projection = *p;
  } else if (key == "levels") {
    c.levels = parse_int(key, v);
  } else {
    throw InvalidConfiguration("unknown configuration key '" + key + "'");
  }
}

SimulationConfig parse_config(const std::string& text, SimulationConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfiguration("line " + std::to_string(lineno) + ": expected key = value");
    }
    set_field(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

SimulationConfig load_config(const std::string& path, SimulationConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidConfiguration("config: cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

std::string write_config(const SimulationConfig& c) {
  std::ostringstream os;
  os << "name = " << c.name << '\n'
     << "scheme = " << to_string(c.scheme) << '\n'
     << "theta = " << format_double(c.theta) << '\n'
     << "gamma = " << format_double(c.gamma) << '\n'
     << "delta = " << format_double(c.delta) << '\n'
     << "R = " << format_double(c.R) << '\n'
     << "grid = " << to_string(c.grid) << '\n'
     << "xi_min = " << format_double(c.xi_min) << '\n'
     << "xi_max = " << format_double(c.xi_max) << '\n'
     << "cells = " << c.cells << '\n'
     << "dt = " << format_double(c.dt) << '\n'
     << "tmax = " << format_double(c.tmax) << '\n'
     << "ic = " << c.ic << '\n'
     << "snapshot_every = " << c.snapshot_every << '\n';
  if (!c.out.empty()) os << "out = " << c.out << '\n';
  os << "strict_negativity = " << (c.strict_negativity ? "true" : "false") << '\n'
     << "outflow = " << (c.outflow ? "true" : "false") << '\n'
     << "projection = " << to_string(c.projection) << '\n'
     << "levels = " << c.levels << '\n';
  return os.str();
}

namespace {

SimulationConfig test1_plain() {
  SimulationConfig c;
  c.name = "test1-plain";
  c.R = 100;
  c.cells = 100;
  c.tmax = 1000;
  c.outflow = true;
  c.projection = Projection::cell_average;
  return c;
}

SimulationConfig test1_weighted() {
  SimulationConfig c = test1_plain();
  c.name = "test1-weighted";
  c.scheme = SchemeKind::weighted;
  c.theta = c.gamma = c.delta = 0.15;
  c.cells = 200;
  c.outflow = false;
  return c;
}

SimulationConfig test2() {
  SimulationConfig c = test1_plain();
  c.name = "test2";
  c.ic = "test2";
  c.R = 70;
  c.cells = 140;
  return c;
}

SimulationConfig eoc_base(const std::string& name, const std::string& ic, double R, double tmax,
                          GridKind grid) {
  SimulationConfig c = test1_plain();
  c.name = name;
  c.ic = ic;
  c.R = R;
  c.cells = 60;
  c.tmax = tmax;
  c.levels = 4;
  c.grid = grid;
  if (grid == GridKind::geometric) {
    c.xi_min = std::log(1e-8);
    c.xi_max = std::log(R);
  }
  return c;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all{
      {"test1-plain", "test I, plain scheme, theta = 1, R = 100, h = 1, T = 1000", test1_plain()},
      {"test1-weighted", "test I, weighted scheme, theta = 0.15, R = 100, h = 0.5, T = 1000",
       test1_weighted()},
      {"test2", "test II, plain scheme, theta = 1, R = 70, h = 0.5, T = 1000", test2()},
      {"eoc-test1-uniform", "convergence, test I, uniform grid on (0, 2], T = 200",
       eoc_base("eoc-test1-uniform", "test1", 2, 200, GridKind::uniform)},
      {"eoc-test1-geometric", "convergence, test I, geometric grid, xi in [ln 1e-8, ln 2], T = 200",
       eoc_base("eoc-test1-geometric", "test1", 2, 200, GridKind::geometric)},
      {"eoc-test2-uniform", "convergence, test II, uniform grid on (0, 10], T = 50",
       eoc_base("eoc-test2-uniform", "test2", 10, 50, GridKind::uniform)},
      {"eoc-test2-geometric", "convergence, test II, geometric grid, xi in [ln 1e-8, ln 10], T = 50",
       eoc_base("eoc-test2-geometric", "test2", 10, 50, GridKind::geometric)},
  };
  return all;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw InvalidConfiguration("preset: unknown preset '" + name + "'");
}

}  // namespace wavekin::cli
