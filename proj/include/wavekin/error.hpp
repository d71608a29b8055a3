#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace wavekin {

/// Bad parameters or inconsistent inputs (non-positive R, mismatched grids, ...).
class InvalidConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed external data, e.g. a tabulated initial condition.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// States compared across grids that are not nested refinements of each other.
class InvalidComparison : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A flux term produced a non-finite value.
class NumericalOverflow : public std::runtime_error {
 public:
  NumericalOverflow(std::string term, std::int64_t cell)
      : std::runtime_error("non-finite value in flux term " + term + " at cell " +
                           std::to_string(cell)),
        term_(std::move(term)),
        cell_(cell) {}

  const std::string& term() const noexcept { return term_; }
  std::int64_t cell() const noexcept { return cell_; }

 private:
  std::string term_;
  std::int64_t cell_;
};

/// The time integration left the finite range, or hit the strict negativity floor.
class NumericalBlowUp : public std::runtime_error {
 public:
  NumericalBlowUp(const std::string& what, std::int64_t step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}

  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

}  // namespace wavekin
