#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "proxrr/permutation.hpp"
#include "proxrr/problem.hpp"
#include "proxrr/reformulate.hpp"

namespace proxrr {

/// sigma_*^2 = (1/n) sum_i |grad f_i(x_*) - grad f(x_*)|^2.
double variance_at_opt(const Problem& problem, ConstVecRef x_star);

/// Limit points x^i = x_* - gamma sum_{j<i} grad f_{pi_j}(x_*) for
/// i = 0, ..., n (so element 0 is x_* itself).
std::vector<Vec> limit_points(const Problem& problem, ConstVecRef x_star, double gamma, const Permutation& pi);

struct RadiusOptions {
  std::size_t num_perms = 1000;  ///< Monte-Carlo sample size
  std::uint64_t seed = 0;
  std::size_t exact_max_n = 6;   ///< enumerate all n! permutations when n <= this
};

struct RadiusEstimate {
  double value = 0.0;               ///< max over i and over stepsizes
  std::vector<double> per_index;    ///< (1/gamma^2) E[D_{f_{pi_i}}(x^i, x_*)] for i = 1..n-1, at the maximizing gamma
  double std_error = 0.0;           ///< of the maximizing entry; 0 when exact
  bool exact = false;
  std::size_t argmax_index = 0;
  double argmax_gamma = 0.0;
};

/// Shuffling radius max_i (1/gamma^2) E_pi[D_{f_{pi_i}}(x^i_*, x_*)], maximized
/// over `gammas`. Exact by enumeration when n <= exact_max_n, Monte-Carlo
/// otherwise. Returns 0 for n = 1.
RadiusEstimate shuffling_radius_empirical(const Problem& problem, ConstVecRef x_star, std::span<const double> gammas,
                                          const RadiusOptions& options = {});
RadiusEstimate shuffling_radius_empirical(const Problem& problem, ConstVecRef x_star, double gamma,
                                          const RadiusOptions& options = {});

/// (L_max / 2) n (n |grad f(x_*)|^2 + sigma_*^2 / 2).
double shuffling_radius_bound(const Problem& problem, ConstVecRef x_star);

/// Federated radius bound L_max sum_m (|grad F_m(x_*)|^2 + (n/4) sigma_{m,*}^2),
/// with sigma_{m,*}^2 the variance of client m's real components at x_*.
double federated_radius_bound(const FederatedProblem& fed, ConstVecRef x_star);

/// sigma_{m,*}^2 for every client.
std::vector<double> client_variances(const FederatedProblem& fed, ConstVecRef x_star);

/// |grad F_m(x_*)|^2 for every client, with F_m the unnormalized client sum.
std::vector<double> client_gradient_norms_sq(const FederatedProblem& fed, ConstVecRef x_star);

struct WorStats {
  Vec mean;         ///< E[Xbar_pi]
  double variance;  ///< E|Xbar_pi - Xbar|^2
};

enum class WorMode { exhaustive, monte_carlo };

/// Statistics of the average of the first i entries of a uniformly random
/// permutation of X. Exhaustive mode enumerates all i-subsets (n <= 8).
/// Throws ArgumentError unless 1 <= i <= n.
WorStats sampling_wor_stats(std::span<const Vec> X, std::size_t i, WorMode mode, std::uint64_t seed = 0,
                            std::size_t num_samples = 100000);

/// Closed forms: mean Xbar, variance (n - i) / (i (n - 1)) sigma^2.
WorStats sampling_wor_closed_form(std::span<const Vec> X, std::size_t i);

enum class BoundKind {
  prox_rr_strongly_convex_f,    ///< (1 - g mu)^{nT} r0 + 2 g^2 srad^2 / mu
  prox_rr_strongly_convex_psi,  ///< (1 + 2 g mu n)^{-T} r0 + g^2 srad^2 / mu
  prox_sgd,                     ///< (1 - g mu)^K r0 + 2 g sstar^2 / mu
  decreasing_stepsizes,         ///< exp(-nT/(kappa + 2n)) r0 + srad^2 / (mu^3 n^2 T^2), absolute constants dropped
  fed_heterogeneous,            ///< (1 + 2 g mu n)^{-T} r0 + (g^2 L_max / (M mu)) fed_sum
  fed_iid,                      ///< (1 - g mu)^{nT} r0 + g^2 L_max N sstar^2 / (M mu)
  complexity_rr_f,              ///< (kappa + sqrt(kappa n)/(sqrt(eps) mu) (sqrt(n)|grad f(x_*)| + sstar)) log(2 r0/eps)
  complexity_sgd,               ///< (kappa + sstar^2 / (eps mu^2)) log(2 r0/eps)
  complexity_rr_psi,            ///< (kappa + (srad/mu)/sqrt(eps mu) + n) log(2 r0/eps)
};

struct BoundParams {
  std::optional<double> gamma;
  std::optional<double> mu;
  std::optional<double> l_max;
  std::optional<std::size_t> n;
  std::optional<std::size_t> epochs;  ///< T
  std::optional<std::size_t> steps;   ///< K (SGD)
  std::optional<double> r0;
  std::optional<double> sigma_rad_sq;
  std::optional<double> sigma_star_sq;
  std::optional<double> grad_norm_at_opt;  ///< |grad f(x_*)|
  std::optional<double> epsilon;
  std::optional<std::size_t> clients;  ///< M
  std::optional<std::size_t> total;    ///< N
  /// sum_m (|grad F_m(x_*)|^2 + (N / (4M)) sigma_{m,*}^2) for fed_heterogeneous.
  std::optional<double> fed_sum;
};

struct BoundValue {
  double value = 0.0;    ///< bound at the given T/K, or the iteration count for complexities
  double plateau = 0.0;  ///< the stepsize-dependent neighborhood term (0 for complexities)
};

/// Throws ArgumentError when a parameter the kind needs is missing.
BoundValue theory_bound(BoundKind kind, const BoundParams& params);

/// theory_bound evaluated at every epoch t = 0..T (or step k = 0..K for prox_sgd).
std::vector<double> theory_curve(BoundKind kind, const BoundParams& params);

}  // namespace proxrr
