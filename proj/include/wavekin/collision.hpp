#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wavekin/error.hpp"
#include "wavekin/grid.hpp"
#include "wavekin/kernel.hpp"
#include "wavekin/weights.hpp"

namespace wavekin {

/// Cell-average densities N_i on a shared grid.
template <typename Scalar = double>
class State {
 public:
  using GridPtr = std::shared_ptr<const Grid<Scalar>>;

  State(GridPtr grid, Vector<Scalar> n) : grid_(std::move(grid)), n_(std::move(n)) {
    if (!grid_) {
      throw InvalidConfiguration("state needs a grid");
    }
    if (n_.size() != grid_->size()) {
      throw InvalidConfiguration("state length " + std::to_string(n_.size()) +
                                 " does not match grid size " + std::to_string(grid_->size()));
    }
    if (!n_.allFinite()) {
      throw InvalidConfiguration("state entries must be finite");
    }
  }

  static State zero(GridPtr grid) {
    const Index n = grid->size();
    return State(std::move(grid), Vector<Scalar>::Zero(n));
  }

  const Grid<Scalar>& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const Vector<Scalar>& n() const noexcept { return n_; }
  Scalar operator()(Index i) const { return n_(i); }
  Index size() const noexcept { return n_.size(); }

  /// Number content per cell, F_i = N_i * dw_i.
  Vector<Scalar> content() const { return n_.cwiseProduct(grid_->widths()); }

  bool nonnegative() const { return (n_.array() >= Scalar(0)).all(); }

 private:
  GridPtr grid_;
  Vector<Scalar> n_;
};

struct CellPair {
  Index j;
  Index k;
  friend bool operator==(const CellPair&, const CellPair&) = default;
};

/// Pairs of cells grouped by where their midpoint sum or difference lands.
struct IndexSets {
  Index cells{0};
  std::vector<std::vector<CellPair>> gain_sum;   // w_j + w_k in cell i (w_j + w_k <= R)
  std::vector<std::vector<CellPair>> gain_diff;  // j > k, w_j - w_k in cell i
  std::vector<CellPair> overflow;                // w_j + w_k > R
};

/// Relative slack used to put sums/differences that sit on a cell edge up to
/// rounding onto that edge. Scaled by the larger of the two midpoints.
inline constexpr double kEdgeTieTolerance = 1e-12;

/// Pair index sets in O(I^2): for fixed j the sum grows and the difference
/// shrinks with k, so one cell cursor per j sweeps monotonically.
template <typename Scalar>
IndexSets build_index_sets(const Grid<Scalar>& grid) {
  const Index n = grid.size();
  const auto& w = grid.centers();
  const auto& e = grid.edges();
  const Scalar R = grid.R();
  const Scalar rel = Scalar(kEdgeTieTolerance);

  IndexSets sets;
  sets.cells = n;
  sets.gain_sum.resize(static_cast<std::size_t>(n));
  sets.gain_diff.resize(static_cast<std::size_t>(n));

  for (Index j = 0; j < n; ++j) {
    Index cell = 0;
    for (Index k = 0; k < n; ++k) {
      const Scalar tol = rel * (w(j) > w(k) ? w(j) : w(k));
      const Scalar sum = w(j) + w(k);
      if (sum > R + tol) {
        sets.overflow.push_back({j, k});
        continue;
      }
      while (cell + 1 < n && sum + tol >= e(cell + 1)) {
        ++cell;
      }
      sets.gain_sum[static_cast<std::size_t>(cell)].push_back({j, k});
    }

    cell = n - 1;
    const Scalar tol = rel * w(j);
    for (Index k = 0; k < j; ++k) {
      const Scalar diff = w(j) - w(k);
      if (!(diff > tol)) {
        continue;
      }
      while (cell > 0 && e(cell) > diff + tol) {
        --cell;
      }
      sets.gain_diff[static_cast<std::size_t>(cell)].push_back({j, k});
    }
  }
  return sets;
}

/// Per-cell rates of the five terms of the discrete collision operator.
template <typename Scalar = double>
struct FluxTerms {
  Vector<Scalar> q1;  // sum gain from K1
  Vector<Scalar> q2;  // K1 loss
  Vector<Scalar> q3;  // difference gain from K2 + K3
  Vector<Scalar> q4;  // K2 + K3 loss against smaller partners
  Vector<Scalar> q5;  // K2 + K3 gain from larger partners

  static FluxTerms zero(Index n) {
    const Vector<Scalar> z = Vector<Scalar>::Zero(n);
    return {z, z, z, z, z};
  }

  std::array<const Vector<Scalar>*, 5> terms() const { return {&q1, &q2, &q3, &q4, &q5}; }

  Vector<Scalar> total() const { return q1 + q2 + q3 + q4 + q5; }
};

/// Discrete collision operator for one grid, kernel set and scheme kind.
///
/// Kernel values, widths and scheme weights are folded into per-pair
/// coefficients at construction, so each evaluation only multiplies densities.
/// All sums run in ascending j, then k, which makes results bitwise
/// reproducible.
template <typename Scalar = double>
class CollisionOperator {
 public:
  using GridPtr = std::shared_ptr<const Grid<Scalar>>;

  CollisionOperator(GridPtr grid, const KernelSpec<Scalar>& kernels,
                    SchemeKind kind = SchemeKind::plain)
      : CollisionOperator(grid, kernels, build_index_sets(*grid), kind) {}

  CollisionOperator(GridPtr grid, const KernelSpec<Scalar>& kernels, IndexSets sets,
                    SchemeKind kind = SchemeKind::plain)
      : grid_(std::move(grid)), kernels_(kernels), sets_(std::move(sets)), kind_(kind) {
    kernels_.validate();
    detail::require_same_radius(kernels_, *grid_);
    if (sets_.cells != grid_->size()) {
      throw InvalidConfiguration("index sets were built for a different grid");
    }
    build_coefficients();
  }

  const Grid<Scalar>& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const KernelSpec<Scalar>& kernels() const noexcept { return kernels_; }
  const IndexSets& sets() const noexcept { return sets_; }
  SchemeKind kind() const noexcept { return kind_; }

  FluxTerms<Scalar> fluxes(const State<Scalar>& state) const {
    if (state.grid_ptr() != grid_ && (state.size() != grid_->size() ||
                                      state.grid().edges() != grid_->edges())) {
      throw InvalidConfiguration("state and operator live on different grids");
    }
    const Index n = grid_->size();
    const auto& N = state.n();
    FluxTerms<Scalar> out = FluxTerms<Scalar>::zero(n);

    for (Index i = 0; i < n; ++i) {
      out.q1(i) = pair_sum(sum_pairs_, i, N);
      out.q3(i) = pair_sum(diff_pairs_, i, N);

      const Scalar* loss = loss_.col(i).data();
      Scalar acc = 0;
      for (Index j = 0; j < n; ++j) {
        acc += loss[j] * N(j);
      }
      out.q2(i) = Scalar(-2) * N(i) * acc;

      const Scalar* frag = frag_.col(i).data();
      Scalar lower = 0;
      for (Index j = 0; j < i; ++j) {
        lower += frag[j] * N(j);
      }
      Scalar upper = 0;
      for (Index j = i + 1; j < n; ++j) {
        upper += frag[j] * N(j);
      }
      out.q4(i) = -N(i) * lower;
      out.q5(i) = N(i) * upper;
    }

    static constexpr std::array<const char*, 5> names{"q1", "q2", "q3", "q4", "q5"};
    const auto terms = out.terms();
    for (std::size_t t = 0; t < terms.size(); ++t) {
      for (Index i = 0; i < n; ++i) {
        if (!std::isfinite(static_cast<double>((*terms[t])(i)))) {
          throw NumericalOverflow(names[t], static_cast<std::int64_t>(i));
        }
      }
    }
    return out;
  }

  /// dN/dt, the sum of the five terms.
  Vector<Scalar> rate(const State<Scalar>& state) const { return fluxes(state).total(); }

 private:
  struct PairTerm {
    std::int32_t j;
    std::int32_t k;
    Scalar coef;
  };

  struct PairTable {
    std::vector<std::size_t> offsets;  // cell i owns [offsets[i], offsets[i+1])
    std::vector<PairTerm> terms;
  };

  static Scalar pair_sum(const PairTable& table, Index i, const Vector<Scalar>& N) {
    Scalar acc = 0;
    const auto begin = table.offsets[static_cast<std::size_t>(i)];
    const auto end = table.offsets[static_cast<std::size_t>(i) + 1];
    for (auto p = begin; p < end; ++p) {
      const PairTerm& t = table.terms[p];
      acc += t.coef * N(t.j) * N(t.k);
    }
    return acc;
  }

  void build_coefficients() {
    const Grid<Scalar>& g = *grid_;
    const Index n = g.size();
    const auto& w = g.centers();
    const auto& dw = g.widths();
    const bool weighted = kind_ == SchemeKind::weighted;

    auto fill = [&](const std::vector<std::vector<CellPair>>& lists, PairTable& table,
                    auto&& coefficient) {
      table.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
      std::size_t total = 0;
      for (Index i = 0; i < n; ++i) {
        total += lists[static_cast<std::size_t>(i)].size();
        table.offsets[static_cast<std::size_t>(i) + 1] = total;
      }
      table.terms.clear();
      table.terms.reserve(total);
      for (Index i = 0; i < n; ++i) {
        for (const CellPair& p : lists[static_cast<std::size_t>(i)]) {
          table.terms.push_back({static_cast<std::int32_t>(p.j), static_cast<std::int32_t>(p.k),
                                 coefficient(i, p.j, p.k)});
        }
      }
    };

    fill(sets_.gain_sum, sum_pairs_, [&](Index i, Index j, Index k) {
      Scalar c = kernel_eval(kernels_, KernelId::k1, w(j), w(k)) * dw(j) * dw(k) / dw(i);
      if (weighted) c *= weight_alpha(g, i, j, k);
      return c;
    });
    fill(sets_.gain_diff, diff_pairs_, [&](Index i, Index j, Index k) {
      Scalar c = difference_kernel(kernels_, w(j) - w(k), w(k)) * dw(j) * dw(k) / dw(i);
      if (weighted) c *= weight_diff(g, i, j, k);
      return c;
    });

    // loss_(j, i) = K1(w_i, w_j) dw_j, so column i is contiguous over partners j
    loss_.resize(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        const Scalar k1 = kernels_.truncate_loss
                              ? kernel_eval(kernels_, KernelId::k1, w(i), w(j))
                              : kernel_eval_untruncated(kernels_, KernelId::k1, w(i), w(j));
        loss_(j, i) = k1 * dw(j);
      }
    }

    // frag_(j, i): j < i holds the q4 loss coefficient of cell i against smaller
    // partner j, j > i the q5 gain coefficient of cell i from larger partner j
    frag_ = Matrix<Scalar>::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (j < i) {
          Scalar c = difference_kernel(kernels_, w(i) - w(j), w(j)) * dw(j);
          if (weighted) c *= weight_beta(g, i, j);
          frag_(j, i) = c;
        } else if (j > i) {
          frag_(j, i) = difference_kernel(kernels_, w(j) - w(i), w(i)) * dw(j);
        }
      }
    }
  }

  GridPtr grid_;
  KernelSpec<Scalar> kernels_;
  IndexSets sets_;
  SchemeKind kind_;
  PairTable sum_pairs_;
  PairTable diff_pairs_;
  Matrix<Scalar> loss_;
  Matrix<Scalar> frag_;
};

/// One-shot flux evaluation; builds the operator around precomputed index sets.
template <typename Scalar>
FluxTerms<Scalar> compute_fluxes(const State<Scalar>& state, const KernelSpec<Scalar>& kernels,
                                 const IndexSets& sets, SchemeKind kind = SchemeKind::plain) {
  return CollisionOperator<Scalar>(state.grid_ptr(), kernels, sets, kind).fluxes(state);
}

}  // namespace wavekin
