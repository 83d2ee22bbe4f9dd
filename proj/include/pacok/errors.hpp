#pragma once

#include <stdexcept>
#include <string>

namespace pacok {

/// Two fields (or a field and a grid) do not describe the same lattice.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad user input: config keys, ranges, operator tables, presets.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A guaranteed property (maximum principle, energy decay) was broken while
/// the corresponding sufficient condition was reported satisfied.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The iterate stopped being finite.
class NumericalBlowup : public std::runtime_error {
 public:
  NumericalBlowup(long step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what),
        step_(step) {}

  long step() const noexcept { return step_; }

 private:
  long step_;
};

}  // namespace pacok
