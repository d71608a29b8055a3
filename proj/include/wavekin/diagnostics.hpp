#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wavekin/collision.hpp"
#include "wavekin/error.hpp"
#include "wavekin/grid.hpp"

namespace wavekin {

/// M_p = sum_i w_i^p N_i dw_i. M0 is the total wave action, M1 the energy.
template <typename Scalar>
Scalar moment(const State<Scalar>& state, int p) {
  if (p < 0 || p > 3) {
    throw InvalidConfiguration("moment order must be in 0..3");
  }
  const Grid<Scalar>& g = state.grid();
  Scalar acc = 0;
  for (Index i = 0; i < g.size(); ++i) {
    Scalar weight = g.width(i);
    for (int q = 0; q < p; ++q) weight *= g.center(i);
    acc += weight * state(i);
  }
  return acc;
}

template <typename Scalar = double>
struct MomentSeries {
  std::vector<Scalar> times;
  std::vector<Scalar> m0, m1, m2, m3;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }

  void record(Scalar t, const State<Scalar>& state) {
    times.push_back(t);
    m0.push_back(moment(state, 0));
    m1.push_back(moment(state, 1));
    m2.push_back(moment(state, 2));
    m3.push_back(moment(state, 3));
  }

  const std::vector<Scalar>& order(int p) const {
    switch (p) {
      case 0: return m0;
      case 1: return m1;
      case 2: return m2;
      case 3: return m3;
    }
    throw InvalidConfiguration("moment order must be in 0..3");
  }
};

/// Outcome of fitting log M1 against log t.
template <typename Scalar = double>
struct DecayFit {
  std::optional<Scalar> slope;  // absent when the window is fully decayed
  std::size_t points{0};
  bool fully_decayed{false};
  bool pass{false};
};

/// Least-squares slope of log M1 vs log t over [t_start, T]; passes when the
/// slope is at most -1/2 + slack, i.e. the energy left on (0, R] decays at
/// least like t^(-1/2).
template <typename Scalar>
DecayFit<Scalar> decay_envelope_check(const MomentSeries<Scalar>& series, Scalar t_start,
                                      Scalar slack = Scalar(0.05)) {
  using std::log;
  DecayFit<Scalar> fit;
  Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < series.size(); ++r) {
    const Scalar t = series.times[r];
    const Scalar e = series.m1[r];
    if (t < t_start || !(t > Scalar(0)) || !(e > Scalar(0))) continue;
    const Scalar x = log(t);
    const Scalar y = log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  fit.points = n;
  const Scalar denom = Scalar(n) * sxx - sx * sx;
  if (n < 2 || !(denom > Scalar(0))) {
    // nothing positive left in the window to fit
    fit.fully_decayed = true;
    fit.pass = true;
    return fit;
  }
  const Scalar slope = (Scalar(n) * sxy - sx * sy) / denom;
  fit.slope = slope;
  fit.pass = slope <= Scalar(-0.5) + slack;
  return fit;
}

/// Sums fine-cell contents F = N dw into the cells of a coarser grid whose edges
/// are a subset of the fine edges.
template <typename Scalar>
Vector<Scalar> aggregate_content(const State<Scalar>& fine, const Grid<Scalar>& coarse) {
  using std::abs;
  const Grid<Scalar>& fg = fine.grid();
  const auto& fe = fg.edges();
  const auto& ce = coarse.edges();
  auto same_edge = [](Scalar a, Scalar b) {
    const Scalar scale = abs(a) > abs(b) ? abs(a) : abs(b);
    return abs(a - b) <= Scalar(1e-10) * scale;
  };
  if (fg.size() < coarse.size() || !same_edge(fe(fe.size() - 1), ce(ce.size() - 1))) {
    throw InvalidComparison("fine grid is not a refinement of the coarse grid");
  }
  Vector<Scalar> out = Vector<Scalar>::Zero(coarse.size());
  Index f = 0;
  for (Index c = 0; c < coarse.size(); ++c) {
    if (!same_edge(fe(f), ce(c))) {
      throw InvalidComparison("coarse edge " + std::to_string(c) +
                              " is not an edge of the fine grid");
    }
    Scalar acc = 0;
    while (f < fg.size() && !same_edge(fe(f), ce(c + 1))) {
      if (fe(f) > ce(c + 1)) {
        throw InvalidComparison("coarse edge " + std::to_string(c + 1) +
                                " is not an edge of the fine grid");
      }
      acc += fine(f) * fg.width(f);
      ++f;
    }
    out(c) = acc;
  }
  if (f != fg.size()) {
    throw InvalidComparison("fine grid extends past the coarse grid");
  }
  return out;
}

/// Discrete L1 distance sum_i |F^a_i - (aggregated F^b)_i| between a coarse state and
/// a state on a nested refinement of its grid.
template <typename Scalar>
Scalar l1_distance(const State<Scalar>& coarse, const State<Scalar>& fine) {
  const Vector<Scalar> agg = aggregate_content(fine, coarse.grid());
  return (coarse.content() - agg).cwiseAbs().sum();
}

/// EOC_k = log2(errors[k-1] / errors[k]); absent where an error is zero.
template <typename Scalar>
std::vector<std::optional<Scalar>> eoc(const std::vector<Scalar>& errors) {
  using std::log2;
  if (errors.size() < 2) {
    throw InvalidConfiguration("EOC needs at least two successive errors");
  }
  std::vector<std::optional<Scalar>> out;
  out.reserve(errors.size() - 1);
  for (std::size_t k = 1; k < errors.size(); ++k) {
    if (errors[k - 1] < Scalar(0) || errors[k] < Scalar(0)) {
      throw InvalidConfiguration("L1 errors must be non-negative");
    }
    if (errors[k - 1] == Scalar(0) || errors[k] == Scalar(0)) {
      out.push_back(std::nullopt);
    } else {
      out.push_back(log2(errors[k - 1] / errors[k]));
    }
  }
  return out;
}

/// One row of a convergence table: cell count, L1 distance to the next
/// refinement, and the EOC against the previous row (absent on the first row and
/// where the solution is exact).
template <typename Scalar = double>
struct EocLevel {
  Index cells{0};
  Scalar l1_error{0};
  std::optional<Scalar> eoc;
};

template <typename Scalar = double>
struct EocReport {
  std::vector<EocLevel<Scalar>> levels;

  std::vector<Scalar> errors() const {
    std::vector<Scalar> out;
    for (const auto& l : levels) out.push_back(l.l1_error);
    return out;
  }
};

/// Builds the table from solutions on successively doubled grids; the last
/// solution only serves as the reference for the row before it.
template <typename Scalar>
EocReport<Scalar> eoc_report(const std::vector<State<Scalar>>& solutions) {
  if (solutions.size() < 2) {
    throw InvalidConfiguration("EOC report needs at least two grid levels");
  }
  EocReport<Scalar> report;
  for (std::size_t l = 0; l + 1 < solutions.size(); ++l) {
    if (solutions[l + 1].size() != 2 * solutions[l].size()) {
      throw InvalidComparison("EOC levels must double the cell count");
    }
    report.levels.push_back({solutions[l].size(), l1_distance(solutions[l], solutions[l + 1]), {}});
  }
  if (report.levels.size() >= 2) {
    const auto values = eoc(report.errors());
    for (std::size_t k = 0; k < values.size(); ++k) {
      report.levels[k + 1].eoc = values[k];
    }
  }
  return report;
}

}  // namespace wavekin
