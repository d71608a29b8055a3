#pragma once

#include "wavekin/grid.hpp"

namespace wavekin {

enum class SchemeKind { plain, weighted };

/// Coagulation gain weight for pair (j, k) deposited in cell i: (w_j + w_k) / w_i
/// while w_j + w_k <= R, zero beyond the truncation radius.
template <typename Scalar>
Scalar weight_alpha(const Grid<Scalar>& grid, Index i, Index j, Index k) {
  const Scalar sum = grid.center(j) + grid.center(k);
  if (!(sum <= grid.R())) {
    return Scalar(0);
  }
  return sum / grid.center(i);
}

/// Fragmentation loss weight 2 w_j / w_i. Midpoints always lie in (0, R], so the
/// zero branch only guards against malformed input.
template <typename Scalar>
Scalar weight_beta(const Grid<Scalar>& grid, Index i, Index j) {
  const Scalar wi = grid.center(i);
  const Scalar wj = grid.center(j);
  if (!(wi > Scalar(0) && wj > Scalar(0) && wi <= grid.R() && wj <= grid.R())) {
    return Scalar(0);
  }
  return Scalar(2) * wj / wi;
}

/// Difference-gain weight w_k / w_i for pair (j, k) whose difference w_j - w_k lands
/// in cell i. Paired with weight_beta it makes the weighted scheme's fragmentation
/// exchange energy neutral: loss 2 w_k against gains w_k (at k) and w_k (at i).
template <typename Scalar>
Scalar weight_diff(const Grid<Scalar>& grid, Index i, Index /*j*/, Index k) {
  return grid.center(k) / grid.center(i);
}

}  // namespace wavekin
