#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wavekin/collision.hpp"
#include "wavekin/grid.hpp"
#include "wavekin/initcond.hpp"
#include "wavekin/kernel.hpp"
#include "wavekin/scheme.hpp"

namespace wavekin::cli {

enum class GridKind { uniform, geometric };

const char* to_string(GridKind kind);

/// Everything one simulation or convergence study needs.
struct SimulationConfig {
  std::string name{"run"};
  SchemeKind scheme{SchemeKind::plain};
  double theta{1.0};
  double gamma{1.0};
  double delta{1.0};
  double R{100.0};
  GridKind grid{GridKind::uniform};
  double xi_min{0.0};
  double xi_max{0.0};
  std::int64_t cells{100};
  double dt{0.1};
  double tmax{1000.0};
  std::string ic{"test1"};
  std::int64_t snapshot_every{100};
  std::string out;
  bool strict_negativity{false};
  // K1 loss keeps pairs that leave (0, R]; energy then drains through R.
  bool outflow{false};
  Projection projection{Projection::midpoint};
  // rows of the convergence table; the study solves levels + 1 grids
  std::int64_t levels{4};

  /// Throws InvalidConfiguration naming the offending field.
  void validate() const;

  KernelSpec<double> kernels() const;
  TimeConfig<double> time() const;
  /// Grid with `cells` cells (defaults to the configured count).
  std::shared_ptr<const Grid<double>> make_grid(std::int64_t cell_count = 0) const;

  bool operator==(const SimulationConfig&) const = default;
};

/// Flat "key = value" text; '#' starts a comment.
SimulationConfig parse_config(const std::string& text, SimulationConfig base = {});
SimulationConfig load_config(const std::string& path, SimulationConfig base = {});
std::string write_config(const SimulationConfig& config);

/// Sets one field from its textual value; throws InvalidConfiguration for
/// unknown keys or malformed values.
void set_field(SimulationConfig& config, const std::string& key, const std::string& value);

struct Preset {
  std::string name;
  std::string description;
  SimulationConfig config;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

}  // namespace wavekin::cli
