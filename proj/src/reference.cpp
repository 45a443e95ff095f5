#include "proxrr/reference.hpp"

#include <cmath>

#include "proxrr/errors.hpp"

namespace proxrr {

double prox_gradient_residual(const Problem& problem, ConstVecRef x, double gamma) {
  Vec step = x - gamma * problem.full_gradient(x);
  problem.regularizer().prox(step, gamma, step);
  return (x - step).norm();
}

double check_fixed_point(const Problem& problem, ConstVecRef x, double gamma, double b) {
  if (!(gamma > 0.0) || !(b > 0.0)) throw ArgumentError("check_fixed_point: gamma and b must be positive");
  const double n = static_cast<double>(problem.size());
  Vec step = x - (gamma * b) * problem.full_gradient(x);
  problem.regularizer().prox(step, gamma * n, step);
  return (x - step).norm();
}

Vec solve_reference(const Problem& problem, const ReferenceOptions& options) {
  if (!(options.tol > 0.0)) throw ArgumentError("solve_reference: tol must be positive");
  const double gamma = 1.0 / (2.0 * problem.l_max());
  const auto d = static_cast<Eigen::Index>(problem.dim());

  Vec x = Vec::Zero(d);
  Vec grad(d);
  Vec next(d);
  double residual = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < options.max_iters; ++k) {
    problem.full_gradient(x, grad);
    next = x - gamma * grad;
    problem.regularizer().prox(next, gamma, next);
    residual = (next - x).norm();
    if (!std::isfinite(residual)) throw ConvergenceError(k, residual);
    // next = T(x) has residual at most |T(x) - x| and is closer to x_*.
    if (residual <= options.tol) return next;
    x.swap(next);
  }
  throw ConvergenceError(options.max_iters, residual);
}

}  // namespace proxrr
