#pragma once

#include <stdexcept>
#include <string>

namespace curvex {

/// Input rejected before any computation (bad unit tag, negative mass, Im z <= 0, ...).
class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Operation requested on a curve variant it does not support.
class UnsupportedCurve : public InvalidInput {
public:
  explicit UnsupportedCurve(const std::string& what) : InvalidInput(what) {}
};

/// Malformed configuration text. line() is 1-based, 0 when the problem has no single line.
class ConfigError : public InvalidInput {
public:
  ConfigError(const std::string& what, int line = 0)
      : InvalidInput(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

/// A numerical procedure failed (degenerate Wronskian, resonance singularity, unstable step).
class NumericalError : public std::runtime_error {
public:
  NumericalError(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

private:
  std::string module_;
};

class NoCrossing : public NumericalError {
public:
  explicit NoCrossing(const std::string& what) : NumericalError("model", what) {}
};

class DegenerateSolution : public NumericalError {
public:
  explicit DegenerateSolution(const std::string& what) : NumericalError("resolvent", what) {}
};

class ResonanceSingularity : public NumericalError {
public:
  explicit ResonanceSingularity(const std::string& what) : NumericalError("coupled", what) {}
};

class StepSizeError : public NumericalError {
public:
  explicit StepSizeError(const std::string& what) : NumericalError("wavepacket", what) {}
};

}  // namespace curvex
