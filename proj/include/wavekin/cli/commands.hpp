#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "wavekin/cli/config.hpp"
#include "wavekin/diagnostics.hpp"
#include "wavekin/scheme.hpp"

namespace wavekin::cli {

struct RunOutcome {
  RunResult<double> result;
  double wall_seconds{0};
};

/// Builds grid, kernels and initial state from `config` and integrates to tmax.
RunOutcome execute_run(const SimulationConfig& config);

void write_moments_csv(std::ostream& os, const MomentSeries<double>& series);
void write_density_csv(std::ostream& os, const Grid<double>& grid, const Vector<double>& n);
/// "density_<t>.csv" with t printed as %.10g.
std::string snapshot_file_name(double time);

void write_run_outputs(const std::filesystem::path& dir, const SimulationConfig& config,
                       const RunOutcome& outcome);

struct EocStudy {
  EocReport<double> report;
  std::vector<double> wall_seconds;
  std::vector<std::int64_t> negative_entries;  // per solve, coarsest first
};

/// Solves on cells, 2 cells, ..., 2^levels cells, at most `workers` at a time.
EocStudy execute_eoc(const SimulationConfig& config, unsigned workers = 1);

void write_eoc_table(std::ostream& os, const SimulationConfig& config, const EocReport<double>& report);
void write_eoc_csv(std::ostream& os, const EocReport<double>& report);

/// Output directory: `config.out` when set, else $WAVEKIN_OUT (or ./wavekin_out) / name.
std::filesystem::path output_dir(const SimulationConfig& config);

/// Subcommand bodies; return the process exit status and report errors on `err`.
int run_command(const SimulationConfig& config, std::ostream& out, std::ostream& err);
int eoc_command(const SimulationConfig& config, unsigned workers, std::ostream& out,
                std::ostream& err);
int presets_command(std::ostream& out);

}  // namespace wavekin::cli
