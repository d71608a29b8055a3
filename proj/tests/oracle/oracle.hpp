#pragma once

// Brute-force references for the collision operator. Nothing here goes through
// build_index_sets, CollisionOperator or the kernel/weight helpers: every pair
// is classified with cell_index_of and every kernel value is recomputed, so a
// bug in the optimized path cannot hide behind shared code.

#include <cmath>
#include <optional>

#include "wavekin/collision.hpp"
#include "wavekin/grid.hpp"
#include "wavekin/kernel.hpp"

namespace wavekin::oracle {

namespace detail {

template <typename Scalar>
Scalar power_kernel(Scalar degree, Scalar R, Scalar w, Scalar m, bool truncate) {
  if (w <= 0 || m <= 0) return 0;
  if (truncate && w + m > R) return 0;
  return std::pow(w * m, degree);
}

// Values within a relative 1e-12 of an edge are moved onto it; the edge then
// belongs to the cell on its right (or the last cell at R).
template <typename Scalar>
std::optional<Index> classify(const Grid<Scalar>& g, Scalar x, Scalar scale) {
  const Scalar tol = Scalar(1e-12) * scale;
  if (x > g.R() + tol) return std::nullopt;
  if (std::abs(x - g.R()) <= tol) return g.size() - 1;
  return cell_index_of(g, x + tol);
}

}  // namespace detail

/// Five flux terms from a double loop over all (j, k).
template <typename Scalar>
FluxTerms<Scalar> oracle_flux_naive(const State<Scalar>& state, const KernelSpec<Scalar>& kern,
                                    SchemeKind kind = SchemeKind::plain) {
  const Grid<Scalar>& g = state.grid();
  const Index n = g.size();
  const Scalar R = g.R();
  const bool weighted = kind == SchemeKind::weighted;
  auto K1 = [&](Scalar a, Scalar b) { return detail::power_kernel(kern.theta, R, a, b, true); };
  auto K1loss = [&](Scalar a, Scalar b) {
    return detail::power_kernel(kern.theta, R, a, b, kern.truncate_loss);
  };
  auto Kd = [&](Scalar a, Scalar b) {
    return detail::power_kernel(kern.gamma, R, a, b, true) +
           detail::power_kernel(kern.delta, R, a, b, true);
  };
  const auto& w = g.centers();
  const auto& dw = g.widths();
  const auto& N = state.n();

  FluxTerms<Scalar> q = FluxTerms<Scalar>::zero(n);
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      const Scalar scale = std::max(w(j), w(k));
      const Scalar sum = w(j) + w(k);
      if (auto c = detail::classify(g, sum, scale)) {
        Scalar v = K1(w(j), w(k)) * N(j) * N(k) * dw(j) * dw(k) / dw(*c);
        if (weighted) v *= (sum <= R ? sum / w(*c) : Scalar(0));
        q.q1(*c) += v;
      }
      const Scalar diff = w(j) - w(k);
      if (diff > Scalar(1e-12) * scale) {
        if (auto c = detail::classify(g, diff, scale)) {
          Scalar v = Kd(diff, w(k)) * N(j) * N(k) * dw(j) * dw(k) / dw(*c);
          if (weighted) v *= w(k) / w(*c);
          q.q3(*c) += v;
        }
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      q.q2(i) -= 2 * K1loss(w(i), w(j)) * N(i) * N(j) * dw(j);
      if (j < i) {
        Scalar v = Kd(w(i) - w(j), w(j)) * N(i) * N(j) * dw(j);
        if (weighted) v *= 2 * w(j) / w(i);
        q.q4(i) -= v;
      } else if (j > i) {
        q.q5(i) += Kd(w(j) - w(i), w(i)) * N(i) * N(j) * dw(j);
      }
    }
  }
  return q;
}

/// T = sum_i w_i dw_i (q1 + ... + q5)_i, the energy production rate of one step.
template <typename Scalar>
Scalar oracle_energy_balance(const State<Scalar>& state, const KernelSpec<Scalar>& kern,
                             SchemeKind kind) {
  const auto q = oracle_flux_naive(state, kern, kind);
  const Grid<Scalar>& g = state.grid();
  Scalar T = 0;
  for (Index i = 0; i < g.size(); ++i) {
    T += g.center(i) * g.width(i) * (q.q1(i) + q.q2(i) + q.q3(i) + q.q4(i) + q.q5(i));
  }
  return T;
}

/// Gross energy turnover sum_i w_i dw_i (|q1| + ... + |q5|)_i; the natural scale
/// against which the balance above is small.
template <typename Scalar>
Scalar oracle_energy_turnover(const State<Scalar>& state, const KernelSpec<Scalar>& kern,
                              SchemeKind kind) {
  const auto q = oracle_flux_naive(state, kern, kind);
  const Grid<Scalar>& g = state.grid();
  Scalar total = 0;
  for (Index i = 0; i < g.size(); ++i) {
    total += g.center(i) * g.width(i) *
             (std::abs(q.q1(i)) + std::abs(q.q2(i)) + std::abs(q.q3(i)) + std::abs(q.q4(i)) +
              std::abs(q.q5(i)));
  }
  return total;
}

}  // namespace wavekin::oracle
