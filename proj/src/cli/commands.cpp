#include "wavekin/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "wavekin/error.hpp"
#include "wavekin/initcond.hpp"

namespace wavekin::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

RunOutcome solve(const SimulationConfig& config, std::int64_t cells, bool snapshots) {
  const auto start = Clock::now();
  const auto grid = config.make_grid(cells);
  auto kernels = config.kernels();
  kernels.R = grid->R();  // geometric grids reproduce R only up to rounding
  const auto ic = InitialCondition<double>::from_tag(config.ic);
  const auto initial = project(ic, grid, config.projection);
  RunOptions<double> options;
  options.strict_negativity = config.strict_negativity;
  options.record_snapshots = snapshots;
  RunOutcome outcome{run(initial, config.scheme, config.time(), kernels, options), 0};
  outcome.wall_seconds = seconds_since(start);
  return outcome;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InvalidInput("failed writing '" + path.string() + "'");
}

}  // namespace

RunOutcome execute_run(const SimulationConfig& config) {
  config.validate();
  return solve(config, config.cells, true);
}

void write_moments_csv(std::ostream& os, const MomentSeries<double>& s) {
  os << "t,M0,M1,M2,M3\n";
  for (std::size_t r = 0; r < s.size(); ++r) {
    os << format_double(s.times[r]) << ',' << format_double(s.m0[r]) << ','
       << format_double(s.m1[r]) << ',' << format_double(s.m2[r]) << ','
       << format_double(s.m3[r]) << '\n';
  }
}

void write_density_csv(std::ostream& os, const Grid<double>& grid, const Vector<double>& n) {
  os << "omega,d_omega,N\n";
  for (Index i = 0; i < grid.size(); ++i) {
    os << format_double(grid.center(i)) << ',' << format_double(grid.width(i)) << ','
       << format_double(n(i)) << '\n';
  }
}

std::string snapshot_file_name(double time) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "density_%.10g.csv", time);
  return buf;
}

void write_run_outputs(const fs::path& dir, const SimulationConfig& config,
                       const RunOutcome& outcome) {
  fs::create_directories(dir);
  const auto& r = outcome.result;
  std::ostringstream moments;
  write_moments_csv(moments, r.moments);
  write_file(dir / "moments.csv", moments.str());
  for (const auto& snap : r.snapshots) {
    std::ostringstream density;
    write_density_csv(density, r.final_state.grid(), snap.n);
    write_file(dir / snapshot_file_name(snap.time), density.str());
  }
  std::ostringstream summary;
  summary << write_config(config) << "steps = " << r.steps << '\n'
          << "negative_entries = " << r.negativity.negative_entries << '\n'
          << "steps_with_negative = " << r.negativity.steps_with_negative << '\n'
          << "most_negative = " << format_double(r.negativity.most_negative) << '\n'
          << "M1_initial = " << format_double(r.moments.m1.front()) << '\n'
          << "M1_final = " << format_double(r.moments.m1.back()) << '\n'
          << "wall_seconds = " << format_double(outcome.wall_seconds) << '\n';
  write_file(dir / "run_summary.txt", summary.str());
}

EocStudy execute_eoc(const SimulationConfig& config, unsigned workers) {
  config.validate();
  if (workers == 0) workers = 1;
  const std::size_t runs = static_cast<std::size_t>(config.levels) + 1;
  std::vector<std::int64_t> cells;
  for (std::size_t l = 0; l < runs; ++l) {
    if (config.cells << l > (1 << 16)) {
      throw InvalidConfiguration("levels: finest grid would exceed 65536 cells");
    }
    cells.push_back(config.cells << l);
  }
  // finest grids first: they dominate the wall time
  std::vector<std::optional<RunOutcome>> done(runs);
  std::vector<std::exception_ptr> failures(runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t n = next++; n < runs; n = next++) {
      const std::size_t l = runs - 1 - n;
      try {
        done[l] = solve(config, cells[l], false);
      } catch (...) {
        failures[l] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < std::min<std::size_t>(workers, runs); ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  std::vector<State<double>> solutions;
  EocStudy study;
  for (std::size_t l = 0; l < runs; ++l) {
    solutions.push_back(done[l]->result.final_state);
    study.wall_seconds.push_back(done[l]->wall_seconds);
    study.negative_entries.push_back(done[l]->result.negativity.negative_entries);
  }
  study.report = eoc_report(solutions);
  return study;
}

void write_eoc_table(std::ostream& os, const SimulationConfig& config, const EocReport<double>& report) {
  char buf[128];
  os << "# " << config.name << ": " << to_string(config.grid) << " grid, " << config.ic
     << ", scheme " << to_string(config.scheme) << ", T = " << format_double(config.tmax)
     << ", dt = " << format_double(config.dt) << '\n';
  std::snprintf(buf, sizeof buf, "%8s  %12s  %8s\n", "cells", "L1 error", "EOC");
  os << buf;
  for (const auto& level : report.levels) {
    std::string rate = "-";
    if (level.eoc) {
      std::snprintf(buf, sizeof buf, "%.4f", *level.eoc);
      rate = buf;
    } else if (&level != &report.levels.front()) {
      rate = "exact";
    }
    if (level.l1_error == 0.0) {
      std::snprintf(buf, sizeof buf, "%8lld  %12s  %8s\n", static_cast<long long>(level.cells),
                    "exact", rate.c_str());
    } else {
      std::snprintf(buf, sizeof buf, "%8lld  %12.3e  %8s\n", static_cast<long long>(level.cells),
                    level.l1_error, rate.c_str());
    }
    os << buf;
  }
}

void write_eoc_csv(std::ostream& os, const EocReport<double>& report) {
  os << "cells,l1_error,eoc\n";
  for (const auto& level : report.levels) {
    os << level.cells << ',' << format_double(level.l1_error) << ','
       << (level.eoc ? format_double(*level.eoc) : "") << '\n';
  }
}

fs::path output_dir(const SimulationConfig& config) {
  if (!config.out.empty()) return config.out;
  const char* root = std::getenv("WAVEKIN_OUT");
  return fs::path(root && *root ? root : "wavekin_out") / config.name;
}

int run_command(const SimulationConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const auto outcome = execute_run(config);
    const auto dir = output_dir(config);
    write_run_outputs(dir, config, outcome);
    const auto& r = outcome.result;
    out << config.name << ": " << r.steps << " steps, M1 " << format_double(r.moments.m1.front())
        << " -> " << format_double(r.moments.m1.back()) << ", negative entries "
        << r.negativity.negative_entries << ", output in " << dir.string() << '\n';
    return 0;
  } catch (const NumericalBlowUp& e) {
    err << "error: numerical blow-up at step " << e.step() << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int eoc_command(const SimulationConfig& config, unsigned workers, std::ostream& out,
                std::ostream& err) {
  try {
    const auto study = execute_eoc(config, workers);
    const auto dir = output_dir(config);
    fs::create_directories(dir);
    std::ostringstream table, csv;
    write_eoc_table(table, config, study.report);
    write_eoc_csv(csv, study.report);
    write_file(dir / "eoc_report.txt", table.str());
    write_file(dir / "eoc_report.csv", csv.str());
    out << table.str();
    std::int64_t negative = 0;
    for (auto n : study.negative_entries) negative += n;
    out << "negative entries over all levels: " << negative << '\n';
    return 0;
  } catch (const NumericalBlowUp& e) {
    err << "error: numerical blow-up at step " << e.step() << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int presets_command(std::ostream& out) {
  for (const auto& p : presets()) {
    out << p.name << "\n  " << p.description << '\n';
  }
  return 0;
}

}  // namespace wavekin::cli
