#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "wavekin/collision.hpp"
#include "wavekin/error.hpp"
#include "wavekin/grid.hpp"

namespace wavekin {

/// Gaussian bump near the origin: 1.25 w exp(-100 (w - 0.25)^2).
template <typename Scalar>
Scalar eval_test1(Scalar w) {
  using std::exp;
  const Scalar d = w - Scalar(0.25);
  return Scalar(1.25) * w * exp(Scalar(-100) * d * d);
}

/// Compactly supported bump on (4, 6): exp(5 / ((w - 5)^2 - 1)), zero for |w - 5| >= 1.
template <typename Scalar>
Scalar eval_test2(Scalar w) {
  using std::exp;
  const Scalar d = w - Scalar(5);
  const Scalar d2 = d * d;
  if (!(d2 < Scalar(1))) {
    return Scalar(0);
  }
  return exp(Scalar(5) / (d2 - Scalar(1)));
}

/// Piecewise-linear density read from a two-column (w, N) table.
template <typename Scalar = double>
class TabulatedProfile {
 public:
  TabulatedProfile(std::vector<Scalar> omega, std::vector<Scalar> density)
      : omega_(std::move(omega)), density_(std::move(density)) {
    if (omega_.size() != density_.size() || omega_.size() < 2) {
      throw InvalidInput("tabulated profile needs at least two (w, N) rows");
    }
    for (std::size_t r = 0; r < omega_.size(); ++r) {
      if (!std::isfinite(static_cast<double>(omega_[r])) ||
          !std::isfinite(static_cast<double>(density_[r]))) {
        throw InvalidInput("non-finite value in tabulated profile row " + std::to_string(r + 1));
      }
      if (density_[r] < Scalar(0)) {
        throw InvalidInput("negative density in tabulated profile row " + std::to_string(r + 1));
      }
      if (omega_[r] < Scalar(0)) {
        throw InvalidInput("negative frequency in tabulated profile row " + std::to_string(r + 1));
      }
      if (r > 0 && !(omega_[r] > omega_[r - 1])) {
        throw InvalidInput("frequencies must be strictly increasing (row " + std::to_string(r + 1) +
                           ")");
      }
    }
  }

  /// Whitespace- or comma-separated columns; blank lines and '#' comments skipped.
  static TabulatedProfile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw InvalidInput("cannot open tabulated profile '" + path + "'");
    }
    std::vector<Scalar> omega, density;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      for (char& c : line) {
        if (c == ',' || c == ';' || c == '\t') c = ' ';
      }
      std::istringstream row(line);
      double w = 0, n = 0;
      if (!(row >> w)) continue;
      std::string rest;
      if (!(row >> n) || (row >> rest)) {
        throw InvalidInput(path + ":" + std::to_string(lineno) + ": expected two columns");
      }
      omega.push_back(Scalar(w));
      density.push_back(Scalar(n));
    }
    return TabulatedProfile(std::move(omega), std::move(density));
  }

  Scalar front() const { return omega_.front(); }
  Scalar back() const { return omega_.back(); }

  /// Linear interpolation, held constant beyond the first and last rows.
  Scalar operator()(Scalar w) const {
    if (w <= omega_.front()) return density_.front();
    if (w >= omega_.back()) return density_.back();
    std::size_t lo = 0, hi = omega_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (omega_[mid] <= w ? lo : hi) = mid;
    }
    const Scalar t = (w - omega_[lo]) / (omega_[hi] - omega_[lo]);
    return density_[lo] + t * (density_[hi] - density_[lo]);
  }

 private:
  std::vector<Scalar> omega_;
  std::vector<Scalar> density_;
};

/// Initial density profile: one of the two analytic test cases, a tabulated
/// file, or an arbitrary callable.
template <typename Scalar = double>
class InitialCondition {
 public:
  struct Test1 {};
  struct Test2 {};
  using Function = std::function<Scalar(Scalar)>;

  static InitialCondition test1() { return InitialCondition(Test1{}, "test1"); }
  static InitialCondition test2() { return InitialCondition(Test2{}, "test2"); }
  static InitialCondition tabulated(TabulatedProfile<Scalar> profile, std::string tag = "file") {
    return InitialCondition(std::move(profile), std::move(tag));
  }
  static InitialCondition function(Function f, std::string tag = "function") {
    return InitialCondition(std::move(f), std::move(tag));
  }

  /// Parses "test1", "test2" or "file:PATH".
  static InitialCondition from_tag(const std::string& tag) {
    if (tag == "test1") return test1();
    if (tag == "test2") return test2();
    if (tag.rfind("file:", 0) == 0) {
      return tabulated(TabulatedProfile<Scalar>::load(tag.substr(5)), tag);
    }
    throw InvalidConfiguration("unknown initial condition '" + tag + "'");
  }

  const std::string& tag() const noexcept { return tag_; }

  const TabulatedProfile<Scalar>* table() const {
    return std::get_if<TabulatedProfile<Scalar>>(&source_);
  }

  Scalar operator()(Scalar w) const {
    return std::visit(
        [w](const auto& s) -> Scalar {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Test1>) {
            return eval_test1(w);
          } else if constexpr (std::is_same_v<T, Test2>) {
            return eval_test2(w);
          } else {
            return s(w);
          }
        },
        source_);
  }

 private:
  using Source = std::variant<Test1, Test2, TabulatedProfile<Scalar>, Function>;

  InitialCondition(Source source, std::string tag)
      : source_(std::move(source)), tag_(std::move(tag)) {}

  Source source_;
  std::string tag_;
};

enum class Projection {
  midpoint,      // N_i = N^in(w_i)
  cell_average,  // N_i = (1 / dw_i) * integral of N^in over the cell
};

inline const char* to_string(Projection p) {
  return p == Projection::cell_average ? "cell_average" : "midpoint";
}

inline std::optional<Projection> projection_from_string(const std::string& s) {
  if (s == "midpoint") return Projection::midpoint;
  if (s == "cell_average") return Projection::cell_average;
  return std::nullopt;
}

/// Cell values of `ic` on `grid`.
template <typename Scalar>
State<Scalar> project(const InitialCondition<Scalar>& ic,
                      std::shared_ptr<const Grid<Scalar>> grid,
                      Projection rule = Projection::midpoint) {
  const Grid<Scalar>& g = *grid;
  if (const auto* table = ic.table()) {
    if (table->front() > g.center(0) || table->back() < g.R() * (Scalar(1) - Scalar(1e-12))) {
      throw InvalidInput("tabulated profile does not cover the domain (0, R]");
    }
  }
  Vector<Scalar> n(g.size());
  for (Index i = 0; i < g.size(); ++i) {
    Scalar value;
    if (rule == Projection::midpoint) {
      value = ic(g.center(i));
    } else {
      using Quadrature = boost::math::quadrature::gauss_kronrod<Scalar, 31>;
      const Scalar integral =
          Quadrature::integrate([&ic](Scalar w) { return ic(w); }, g.edge(i), g.edge(i + 1), 15,
                                Scalar(1e-12));
      value = integral / g.width(i);
    }
    if (!std::isfinite(static_cast<double>(value)) || value < Scalar(0)) {
      throw InvalidInput("initial condition '" + ic.tag() + "' is negative or non-finite in cell " +
                         std::to_string(i));
    }
    n(i) = value;
  }
  return State<Scalar>(std::move(grid), std::move(n));
}

}  // namespace wavekin
