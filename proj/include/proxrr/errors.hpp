#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace proxrr {

/// Bad input to a library call: dimension mismatch, out-of-range index,
/// missing parameter, invalid configuration value.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An optimizer produced a nonfinite coordinate.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t epoch, std::size_t step, std::optional<std::size_t> client = std::nullopt);

  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t step() const noexcept { return step_; }
  std::optional<std::size_t> client() const noexcept { return client_; }

 private:
  std::size_t epoch_;
  std::size_t step_;
  std::optional<std::size_t> client_;
};

/// The reference solver hit its iteration limit.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::size_t iterations, double residual);

  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace proxrr
