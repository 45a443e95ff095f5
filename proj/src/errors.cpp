#include "proxrr/errors.hpp"

namespace proxrr {

namespace {

std::string divergence_message(std::size_t epoch, std::size_t step, std::optional<std::size_t> client) {
  std::string msg = "nonfinite iterate at epoch " + std::to_string(epoch) + ", step " + std::to_string(step);
  if (client) msg += ", client " + std::to_string(*client);
  return msg;
}

}  // namespace

DivergenceError::DivergenceError(std::size_t epoch, std::size_t step, std::optional<std::size_t> client)
    : std::runtime_error(divergence_message(epoch, step, client)), epoch_(epoch), step_(step), client_(client) {}

ConvergenceError::ConvergenceError(std::size_t iterations, double residual)
    : std::runtime_error("reference solver did not converge after " + std::to_string(iterations) +
                         " iterations (residual " + std::to_string(residual) + ")"),
      iterations_(iterations),
      residual_(residual) {}

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + what : source + ": " + what),
      line_(line) {}

}  // namespace proxrr
