#pragma once

#include <cstddef>

#include "proxrr/problem.hpp"

namespace proxrr {

struct ReferenceOptions {
  double tol = 1e-10;
  std::size_t max_iters = 1'000'000;
};

/// High-accuracy minimizer of P by deterministic proximal gradient descent
/// with stepsize 1/(2 L_max), started at zero. Stops once
/// |x - prox_{g psi}(x - g grad f(x))| <= tol. Throws ConvergenceError
/// carrying the last residual when max_iters is exhausted.
Vec solve_reference(const Problem& problem, const ReferenceOptions& options = {});

/// |x - prox_{gamma n psi}(x - gamma b grad f(x))|.
double check_fixed_point(const Problem& problem, ConstVecRef x, double gamma, double b);

/// Proximal-gradient residual |x - prox_{gamma psi}(x - gamma grad f(x))|.
double prox_gradient_residual(const Problem& problem, ConstVecRef x, double gamma);

}  // namespace proxrr
