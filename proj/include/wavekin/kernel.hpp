#pragma once

#include <cmath>

#include "wavekin/error.hpp"
#include "wavekin/grid.hpp"

namespace wavekin {

/// K1 drives the coagulation-like exchange, K2 and K3 the two fragmentation-like ones.
enum class KernelId { k1 = 1, k2 = 2, k3 = 3 };

/// Product-power kernels K(w, m) = (w m)^degree, one degree per kernel.
template <typename Scalar = double>
struct KernelSpec {
  Scalar theta{1};
  Scalar gamma{1};
  Scalar delta{1};
  Scalar R{1};
  // When false, the K1 loss term keeps pairs with w + m > R, which lets energy
  // leave the truncated domain. Gain terms are always truncated.
  bool truncate_loss{true};

  Scalar degree(KernelId which) const {
    switch (which) {
      case KernelId::k1:
        return theta;
      case KernelId::k2:
        return gamma;
      case KernelId::k3:
        return delta;
    }
    return theta;
  }

  void validate() const {
    auto ok = [](Scalar d) { return std::isfinite(static_cast<double>(d)) && d >= Scalar(0); };
    if (!ok(theta)) throw InvalidConfiguration("kernel degree theta must be finite and >= 0");
    if (!ok(gamma)) throw InvalidConfiguration("kernel degree gamma must be finite and >= 0");
    if (!ok(delta)) throw InvalidConfiguration("kernel degree delta must be finite and >= 0");
    if (!(R > Scalar(0)) || !std::isfinite(static_cast<double>(R))) {
      throw InvalidConfiguration("kernel truncation radius R must be positive and finite");
    }
  }
};

/// (w m)^degree without the truncation rule; zero unless both arguments are positive.
template <typename Scalar>
Scalar kernel_eval_untruncated(const KernelSpec<Scalar>& spec, KernelId which, Scalar w, Scalar m) {
  using std::pow;
  if (!(w > Scalar(0)) || !(m > Scalar(0))) {
    return Scalar(0);
  }
  return pow(w * m, spec.degree(which));
}

/// Truncated kernel: (w m)^degree when w, m > 0 and w + m <= R, zero otherwise.
template <typename Scalar>
Scalar kernel_eval(const KernelSpec<Scalar>& spec, KernelId which, Scalar w, Scalar m) {
  if (!(w + m <= spec.R)) {
    return Scalar(0);
  }
  return kernel_eval_untruncated(spec, which, w, m);
}

/// Sum of the two fragmentation kernels, K2 + K3, at (w, m).
template <typename Scalar>
Scalar difference_kernel(const KernelSpec<Scalar>& spec, Scalar w, Scalar m) {
  return kernel_eval(spec, KernelId::k2, w, m) + kernel_eval(spec, KernelId::k3, w, m);
}

namespace detail {

template <typename Scalar>
void require_same_radius(const KernelSpec<Scalar>& spec, const Grid<Scalar>& grid) {
  using std::abs;
  if (abs(spec.R - grid.R()) > Scalar(1e-12) * grid.R()) {
    throw InvalidConfiguration("kernel R does not match grid R");
  }
}

}  // namespace detail

/// Kernel evaluated at every pair of cell midpoints.
template <typename Scalar>
Matrix<Scalar> kernel_table(const KernelSpec<Scalar>& spec, const Grid<Scalar>& grid,
                            KernelId which) {
  detail::require_same_radius(spec, grid);
  const Index n = grid.size();
  Matrix<Scalar> table(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      table(i, j) = kernel_eval(spec, which, grid.center(i), grid.center(j));
    }
  }
  return table;
}

}  // namespace wavekin
