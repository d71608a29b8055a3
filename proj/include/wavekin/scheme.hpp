#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavekin/collision.hpp"
#include "wavekin/diagnostics.hpp"
#include "wavekin/error.hpp"
#include "wavekin/kernel.hpp"
#include "wavekin/weights.hpp"

namespace wavekin {

inline const char* to_string(SchemeKind kind) {
  return kind == SchemeKind::weighted ? "weighted" : "plain";
}

inline std::optional<SchemeKind> scheme_from_string(const std::string& s) {
  if (s == "plain") return SchemeKind::plain;
  if (s == "weighted") return SchemeKind::weighted;
  return std::nullopt;
}

/// Constant step dt on [0, t_end].
template <typename Scalar = double>
struct TimeConfig {
  Scalar dt{0.1};
  Scalar t_end{0};
  std::int64_t snapshot_stride{100};

  void validate() const {
    using std::abs;
    if (!(dt > Scalar(0)) || !std::isfinite(static_cast<double>(dt))) {
      throw InvalidConfiguration("time step dt must be positive");
    }
    if (!(t_end >= Scalar(0)) || !std::isfinite(static_cast<double>(t_end))) {
      throw InvalidConfiguration("final time must be non-negative");
    }
    if (snapshot_stride < 1) {
      throw InvalidConfiguration("snapshot stride must be at least 1");
    }
    const Scalar n = std::round(static_cast<double>(t_end / dt));
    if (abs(n * dt - t_end) > Scalar(1e-9) * (t_end > Scalar(1) ? t_end : Scalar(1))) {
      throw InvalidConfiguration("final time must be an integer multiple of dt");
    }
  }

  std::int64_t steps() const { return std::llround(static_cast<double>(t_end / dt)); }
  Scalar time_at(std::int64_t step) const { return Scalar(step) * dt; }
};

/// Entries that went below zero during a run. Negative values are kept, since
/// clipping would break the conservation identity of the weighted scheme.
template <typename Scalar = double>
struct NegativityReport {
  std::int64_t negative_entries{0};
  std::int64_t steps_with_negative{0};
  std::optional<std::int64_t> first_step;
  Scalar most_negative{0};

  void observe(const Vector<Scalar>& n, std::int64_t step) {
    std::int64_t count = 0;
    for (Index i = 0; i < n.size(); ++i) {
      if (n(i) < Scalar(0)) {
        ++count;
        if (n(i) < most_negative) most_negative = n(i);
      }
    }
    if (count > 0) {
      negative_entries += count;
      ++steps_with_negative;
      if (!first_step) first_step = step;
    }
  }
};

/// Explicit Euler stepping with a fixed collision operator.
template <typename Scalar = double>
class Stepper {
 public:
  Stepper(typename State<Scalar>::GridPtr grid, const KernelSpec<Scalar>& kernels,
          SchemeKind kind)
      : op_(std::move(grid), kernels, kind) {}

  explicit Stepper(CollisionOperator<Scalar> op) : op_(std::move(op)) {}

  const CollisionOperator<Scalar>& op() const noexcept { return op_; }

  /// N^{n+1} = N^n + dt * (q1 + ... + q5); `step_index` only labels errors.
  State<Scalar> step(const State<Scalar>& state, Scalar dt, std::int64_t step_index = 0) const {
    if (!(dt > Scalar(0))) {
      throw InvalidConfiguration("time step dt must be positive");
    }
    Vector<Scalar> next;
    try {
      next = state.n() + dt * op_.rate(state);
    } catch (const NumericalOverflow& e) {
      throw NumericalBlowUp(e.what(), step_index);
    }
    if (!next.allFinite()) {
      throw NumericalBlowUp("non-finite density", step_index);
    }
    return State<Scalar>(state.grid_ptr(), std::move(next));
  }

 private:
  CollisionOperator<Scalar> op_;
};

/// Single step without a cached operator; index sets are reused from the caller.
template <typename Scalar>
State<Scalar> step(const State<Scalar>& state, SchemeKind kind, Scalar dt,
                   const KernelSpec<Scalar>& kernels, const IndexSets& sets) {
  return Stepper<Scalar>(CollisionOperator<Scalar>(state.grid_ptr(), kernels, sets, kind))
      .step(state, dt);
}

template <typename Scalar = double>
struct Snapshot {
  std::int64_t step{0};
  Scalar time{0};
  Vector<Scalar> n;
};

template <typename Scalar = double>
struct RunOptions {
  // abort once an entry drops below -floor * max(N)
  bool strict_negativity{false};
  Scalar strict_floor{1e-12};
  bool record_snapshots{true};
};

template <typename Scalar = double>
struct RunResult {
  State<Scalar> final_state;
  MomentSeries<Scalar> moments;
  std::vector<Snapshot<Scalar>> snapshots;
  NegativityReport<Scalar> negativity;
  std::int64_t steps{0};
};

/// Advances `initial` to t_end, recording moments every step and densities at
/// step 0, every stride, and the final step.
template <typename Scalar>
RunResult<Scalar> run(const State<Scalar>& initial, SchemeKind kind,
                      const TimeConfig<Scalar>& time, const KernelSpec<Scalar>& kernels,
                      const RunOptions<Scalar>& options = {}) {
  time.validate();
  const Stepper<Scalar> stepper(initial.grid_ptr(), kernels, kind);
  const std::int64_t steps = time.steps();

  RunResult<Scalar> result{initial, {}, {}, {}, steps};
  result.moments.record(Scalar(0), initial);
  if (options.record_snapshots) {
    result.snapshots.push_back({0, Scalar(0), initial.n()});
  }

  State<Scalar> current = initial;
  for (std::int64_t s = 1; s <= steps; ++s) {
    current = stepper.step(current, time.dt, s);
    result.negativity.observe(current.n(), s);
    if (options.strict_negativity) {
      const Scalar floor = -options.strict_floor * current.n().maxCoeff();
      if (current.n().minCoeff() < floor) {
        throw NumericalBlowUp("density dropped below the strict negativity floor", s);
      }
    }
    const Scalar t = time.time_at(s);
    result.moments.record(t, current);
    if (options.record_snapshots && (s % time.snapshot_stride == 0 || s == steps)) {
      result.snapshots.push_back({s, t, current.n()});
    }
  }
  result.final_state = std::move(current);
  return result;
}

}  // namespace wavekin
