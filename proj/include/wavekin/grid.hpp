#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "wavekin/error.hpp"

namespace wavekin {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/// One-dimensional frequency mesh over the truncated domain (0, R].
///
/// Cells are stored 0-based: cell i spans [edges(i), edges(i+1)) except the
/// last one, which is closed at R. Immutable once built.
template <typename Scalar = double>
class Grid {
 public:
  using VectorType = Vector<Scalar>;

  /// Validates and adopts a list of I+1 edges starting at exactly 0.
  static Grid from_edges(VectorType edges) {
    if (edges.size() < 2) {
      throw InvalidConfiguration("grid needs at least one cell");
    }
    if (edges(0) != Scalar(0)) {
      throw InvalidConfiguration("first grid edge must be exactly 0");
    }
    for (Index k = 1; k < edges.size(); ++k) {
      if (!std::isfinite(static_cast<double>(edges(k))) || !(edges(k) > edges(k - 1))) {
        throw InvalidConfiguration("grid edges must be finite and strictly increasing");
      }
    }
    return Grid(std::move(edges));
  }

  const VectorType& edges() const noexcept { return edges_; }
  const VectorType& centers() const noexcept { return centers_; }
  const VectorType& widths() const noexcept { return widths_; }

  Scalar edge(Index k) const { return edges_(k); }
  Scalar center(Index i) const { return centers_(i); }
  Scalar width(Index i) const { return widths_(i); }

  Scalar R() const noexcept { return edges_(edges_.size() - 1); }
  Index size() const noexcept { return centers_.size(); }

  Scalar min_width() const { return widths_.minCoeff(); }
  Scalar max_width() const { return widths_.maxCoeff(); }

 private:
  explicit Grid(VectorType edges) : edges_(std::move(edges)) {
    const Index n = edges_.size() - 1;
    centers_ = (edges_.head(n) + edges_.tail(n)) / Scalar(2);
    widths_ = edges_.tail(n) - edges_.head(n);
  }

  VectorType edges_;
  VectorType centers_;
  VectorType widths_;
};

/// Uniform mesh with h = R / cells.
template <typename Scalar = double>
Grid<Scalar> build_uniform_grid(Scalar R, Index cells) {
  if (!(R > Scalar(0)) || !std::isfinite(static_cast<double>(R))) {
    throw InvalidConfiguration("truncation radius R must be positive and finite");
  }
  if (cells < 1) {
    throw InvalidConfiguration("cell count must be at least 1");
  }
  Vector<Scalar> edges(cells + 1);
  for (Index k = 0; k <= cells; ++k) {
    edges(k) = R * Scalar(k) / Scalar(cells);
  }
  edges(cells) = R;
  return Grid<Scalar>::from_edges(std::move(edges));
}

/// Mesh with edges exp(xi_k), xi_k uniform on [xi_min, xi_max]; the first edge is
/// replaced by 0 so the domain stays (0, R] with R = exp(xi_max).
template <typename Scalar = double>
Grid<Scalar> build_geometric_grid(Scalar xi_min, Scalar xi_max, Index cells) {
  using std::exp;
  if (!(xi_min < xi_max)) {
    throw InvalidConfiguration("geometric grid needs xi_min < xi_max");
  }
  if (cells < 1) {
    throw InvalidConfiguration("cell count must be at least 1");
  }
  const Scalar step = (xi_max - xi_min) / Scalar(cells);
  Vector<Scalar> edges(cells + 1);
  edges(0) = Scalar(0);
  for (Index k = 1; k < cells; ++k) {
    edges(k) = exp(xi_min + Scalar(k) * step);
  }
  edges(cells) = exp(xi_max);
  return Grid<Scalar>::from_edges(std::move(edges));
}

/// Cell containing x under the half-open convention, with x = R mapped to the
/// last cell. Absent for x < 0 or x > R.
template <typename Scalar>
std::optional<Index> cell_index_of(const Grid<Scalar>& grid, Scalar x) {
  const auto& e = grid.edges();
  if (!(x >= Scalar(0)) || x > grid.R()) {
    return std::nullopt;
  }
  if (x == grid.R()) {
    return grid.size() - 1;
  }
  // first edge strictly greater than x bounds the cell from the right
  const auto* begin = e.data();
  const auto* end = e.data() + e.size();
  const auto* upper = std::upper_bound(begin, end, x);
  return static_cast<Index>(upper - begin) - 1;
}

}  // namespace wavekin
