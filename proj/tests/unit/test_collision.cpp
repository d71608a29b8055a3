#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "oracle.hpp"
#include "wavekin/collision.hpp"
#include "wavekin/weights.hpp"

using namespace wavekin;

namespace {

using GridPtr = std::shared_ptr<const Grid<double>>;

GridPtr uniform(double R, Index cells) {
  return std::make_shared<const Grid<double>>(build_uniform_grid(R, cells));
}

GridPtr geometric(double R, Index cells) {
  return std::make_shared<const Grid<double>>(build_geometric_grid(std::log(1e-4), std::log(R), cells));
}

State<double> random_state(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector<double> n(g->size());
  for (Index i = 0; i < n.size(); ++i) n(i) = u(rng);
  return State<double>(g, n);
}

// Every (j, k) classified independently with cell_index_of and a tie nudge.
IndexSets naive_sets(const Grid<double>& g) {
  IndexSets s;
  s.cells = g.size();
  s.gain_sum.resize(g.size());
  s.gain_diff.resize(g.size());
  for (Index j = 0; j < g.size(); ++j) {
    for (Index k = 0; k < g.size(); ++k) {
      const double scale = std::max(g.center(j), g.center(k));
      const double sum = g.center(j) + g.center(k);
      if (auto c = oracle::detail::classify(g, sum, scale)) {
        s.gain_sum[*c].push_back({j, k});
      } else {
        s.overflow.push_back({j, k});
      }
      const double diff = g.center(j) - g.center(k);
      if (diff > 1e-12 * scale) {
        if (auto c = oracle::detail::classify(g, diff, scale)) s.gain_diff[*c].push_back({j, k});
      }
    }
  }
  return s;
}

bool same_pairs(std::vector<CellPair> a, std::vector<CellPair> b) {
  auto less = [](const CellPair& x, const CellPair& y) {
    return x.j != y.j ? x.j < y.j : x.k < y.k;
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

void check_close(const Vector<double>& a, const Vector<double>& b, double scale) {
  REQUIRE(a.size() == b.size());
  for (Index i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a(i) - b(i)) <= 1e-12 * scale);
  }
}

}  // namespace

TEST_CASE("index sets on the two-cell grid") {
  const auto sets = build_index_sets(build_uniform_grid(2.0, 2));
  CHECK(sets.cells == 2);
  CHECK(sets.gain_sum[0].empty());
  CHECK(same_pairs(sets.gain_sum[1], {{0, 0}, {0, 1}, {1, 0}}));
  CHECK(same_pairs(sets.overflow, {{1, 1}}));
  CHECK(sets.gain_diff[0].empty());
  CHECK(same_pairs(sets.gain_diff[1], {{1, 0}}));
}

TEST_CASE("index sets on the four-cell grid") {
  // centers 0.25, 0.75, 1.25, 1.75 with unit edges of 0.5
  const auto sets = build_index_sets(build_uniform_grid(2.0, 4));
  CHECK(same_pairs(sets.gain_sum[1], {{0, 0}}));
  CHECK(same_pairs(sets.gain_sum[2], {{0, 1}, {1, 0}}));
  // 1.5 sits on an edge and 2.0 equals R; both go to the last cell
  CHECK(same_pairs(sets.gain_sum[3], {{0, 2}, {2, 0}, {1, 1}, {0, 3}, {3, 0}, {1, 2}, {2, 1}}));
  CHECK(sets.overflow.size() == 6);
  CHECK(same_pairs(sets.gain_diff[1], {{1, 0}, {2, 1}, {3, 2}}));
  CHECK(same_pairs(sets.gain_diff[2], {{2, 0}, {3, 1}}));
  CHECK(same_pairs(sets.gain_diff[3], {{3, 0}}));
  CHECK(sets.gain_diff[0].empty());
}

TEST_CASE("index sets match the brute-force classification") {
  for (Index I : {1, 2, 3, 5, 16, 33, 64}) {
    for (const auto& g : {uniform(7.0, I), geometric(7.0, I)}) {
      const auto fast = build_index_sets(*g);
      const auto slow = naive_sets(*g);
      CHECK(same_pairs(fast.overflow, slow.overflow));
      std::size_t total = fast.overflow.size();
      for (Index i = 0; i < I; ++i) {
        CHECK(same_pairs(fast.gain_sum[i], slow.gain_sum[i]));
        CHECK(same_pairs(fast.gain_diff[i], slow.gain_diff[i]));
        total += fast.gain_sum[i].size();
      }
      // every ordered pair is either gained or overflows, exactly once
      CHECK(total == static_cast<std::size_t>(I * I));
    }
  }
}

TEST_CASE("sum pairs respect the domain") {
  const auto g = geometric(3.0, 40);
  const auto sets = build_index_sets(*g);
  for (const auto& p : sets.overflow) {
    CHECK(g->center(p.j) + g->center(p.k) > g->R() * (1 - 1e-12));
  }
  for (Index i = 0; i < g->size(); ++i) {
    for (const auto& p : sets.gain_diff[i]) CHECK(p.j > p.k);
  }
}

TEST_CASE("fluxes on the two-cell example") {
  const auto g = uniform(2.0, 2);
  const State<double> s(g, Vector<double>{{1.0, 0.0}});
  const KernelSpec<double> k{1.0, 1.0, 1.0, 2.0};
  const auto q = compute_fluxes(s, k, build_index_sets(*g));
  CHECK(q.q1(0) == 0.0);
  CHECK(q.q1(1) == 0.25);
  CHECK(q.q2(0) == -0.5);
  CHECK(q.q2(1) == 0.0);
  CHECK(q.q3.isZero());
  CHECK(q.q4.isZero());
  CHECK(q.q5.isZero());
}

TEST_CASE("zero state has zero fluxes") {
  const auto g = geometric(5.0, 20);
  const CollisionOperator<double> op(g, {0.7, 1.0, 0.3, 5.0});
  const auto q = op.fluxes(State<double>::zero(g));
  CHECK(q.total().isZero());
}

TEST_CASE("operator agrees with the naive oracle on random states") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> deg(0.0, 1.5);
  for (int trial = 0; trial < 24; ++trial) {
    const Index I = 1 + static_cast<Index>(rng() % 40);
    const auto g = trial % 2 ? uniform(10.0, I) : geometric(10.0, I);
    KernelSpec<double> k{deg(rng), deg(rng), deg(rng), 10.0};
    k.truncate_loss = trial % 3 != 0;
    const auto s = random_state(g, rng);
    for (auto kind : {SchemeKind::plain, SchemeKind::weighted}) {
      const auto fast = CollisionOperator<double>(g, k, kind).fluxes(s);
      const auto slow = oracle::oracle_flux_naive(s, k, kind);
      const double scale = 1.0 + oracle::oracle_energy_turnover(s, k, kind);
      check_close(fast.q1, slow.q1, scale);
      check_close(fast.q2, slow.q2, scale);
      check_close(fast.q3, slow.q3, scale);
      check_close(fast.q4, slow.q4, scale);
      check_close(fast.q5, slow.q5, scale);
    }
  }
}

TEST_CASE("weighted scheme conserves energy exactly") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Index I = 2 + static_cast<Index>(rng() % 60);
    const auto g = trial % 2 ? uniform(100.0, I) : geometric(100.0, I);
    const KernelSpec<double> k{0.15 * (1 + trial % 4), 0.5, 1.0, 100.0};
    const auto s = random_state(g, rng);
    const double T = oracle::oracle_energy_balance(s, k, SchemeKind::weighted);
    const double scale = oracle::oracle_energy_turnover(s, k, SchemeKind::weighted);
    CHECK(std::abs(T) <= 1e-12 * scale);
  }
}

TEST_CASE("K1 loss term keeps overflowing pairs when the loss is untruncated") {
  const auto g = uniform(2.0, 2);
  const State<double> s(g, Vector<double>{{0.0, 1.0}});
  KernelSpec<double> k{1.0, 1.0, 1.0, 2.0};
  CHECK(compute_fluxes(s, k, build_index_sets(*g)).q2(1) == 0.0);
  k.truncate_loss = false;
  CHECK(compute_fluxes(s, k, build_index_sets(*g)).q2(1) == -2 * 1.5 * 1.5);
}

TEST_CASE("operator rejects foreign states and mismatched kernels") {
  const auto g = uniform(2.0, 4);
  const CollisionOperator<double> op(g, {1.0, 1.0, 1.0, 2.0});
  CHECK_THROWS_AS(op.fluxes(State<double>::zero(uniform(2.0, 8))), InvalidConfiguration);
  CHECK_NOTHROW(op.fluxes(State<double>::zero(uniform(2.0, 4))));
  CHECK_THROWS_AS(CollisionOperator<double>(g, {1.0, 1.0, 1.0, 3.0}), InvalidConfiguration);
  CHECK_THROWS_AS(CollisionOperator<double>(g, {-1.0, 1.0, 1.0, 2.0}), InvalidConfiguration);
  CHECK_THROWS_AS(CollisionOperator<double>(g, {1.0, 1.0, 1.0, 2.0}, build_index_sets(*uniform(2.0, 3))),
                  InvalidConfiguration);
}

TEST_CASE("overflowing flux names the term") {
  const auto g = uniform(2.0, 2);
  const State<double> s(g, Vector<double>{{1e200, 1e200}});
  const CollisionOperator<double> op(g, {1.0, 1.0, 1.0, 2.0});
  try {
    op.fluxes(s);
    FAIL("expected overflow");
  } catch (const NumericalOverflow& e) {
    CHECK(e.cell() >= 0);
    CHECK_FALSE(e.term().empty());
  }
}

TEST_CASE("state validation") {
  const auto g = uniform(1.0, 3);
  CHECK_THROWS_AS(State<double>(g, Vector<double>::Zero(2)), InvalidConfiguration);
  CHECK_THROWS_AS(State<double>(g, Vector<double>::Constant(3, std::nan(""))), InvalidConfiguration);
  CHECK_THROWS_AS(State<double>(nullptr, Vector<double>::Zero(3)), InvalidConfiguration);
  const State<double> s(g, Vector<double>{{1.0, -2.0, 3.0}});
  CHECK_FALSE(s.nonnegative());
  CHECK(s.content()(1) == doctest::Approx(-2.0 / 3));
}

TEST_CASE("scheme weights") {
  const auto g = build_uniform_grid(2.0, 2);
  CHECK(weight_alpha(g, 1, 0, 0) == doctest::Approx(2.0 / 3));
  CHECK(weight_alpha(g, 1, 0, 1) == doctest::Approx(4.0 / 3));
  CHECK(weight_beta(g, 1, 0) == doctest::Approx(2.0 / 3));
  CHECK(weight_beta(g, 1, 1) == 2.0);
  CHECK(weight_diff(g, 1, 1, 0) == doctest::Approx(1.0 / 3));
  CHECK(weight_alpha(g, 1, 1, 1) == 0.0);  // sum beyond R
}

TEST_CASE("operator runs in long double") {
  auto g = std::make_shared<const Grid<long double>>(build_uniform_grid<long double>(2.0L, 2));
  const State<long double> s(g, Vector<long double>{{1.0L, 0.0L}});
  const CollisionOperator<long double> op(g, {1.0L, 1.0L, 1.0L, 2.0L});
  const auto q = op.fluxes(s);
  CHECK(q.q1(1) == 0.25L);
  CHECK(q.q2(0) == -0.5L);
}
