#include "proxrr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "proxrr/errors.hpp"
#include "proxrr/rng.hpp"

namespace proxrr {

namespace {

std::vector<Vec> gradients_at(const Problem& problem, ConstVecRef x) {
  std::vector<Vec> g;
  g.reserve(problem.size());
  for (const auto& c : problem.components()) g.push_back(c->gradient(x));
  return g;
}

Vec plain_mean(std::span<const Vec> X) {
  Vec mean = Vec::Zero(X.front().size());
  for (const auto& v : X) mean += v;
  return mean / static_cast<double>(X.size());
}

double population_variance(std::span<const Vec> X, const Vec& mean) {
  double s = 0.0;
  for (const auto& v : X) s += (v - mean).squaredNorm();
  return s / static_cast<double>(X.size());
}

template <class T>
T require(const std::optional<T>& v, const char* name) {
  if (!v) throw ArgumentError(std::string("theory_bound: missing parameter ") + name);
  return *v;
}

// Accumulates Bregman terms D_{f_{pi_i}}(x^i, x_*) for i = 1..n-1 along one permutation.
class RadiusAccumulator {
 public:
  RadiusAccumulator(const Problem& problem, ConstVecRef x_star, double gamma)
      : problem_(problem), x_star_(x_star), gamma_(gamma), grads_(gradients_at(problem, x_star)) {
    values_at_star_.reserve(problem.size());
    for (const auto& c : problem.components()) values_at_star_.push_back(c->value(x_star));
    const std::size_t n = problem.size();
    sum_.assign(n, 0.0);
    sum_sq_.assign(n, 0.0);
  }

  void add(const Permutation& perm) {
    Vec x = x_star_;
    for (std::size_t i = 1; i < perm.size(); ++i) {
      x -= gamma_ * grads_[perm[i - 1]];
      const std::size_t k = perm[i];
      const double d = problem_.component(k).value(x) - values_at_star_[k] - grads_[k].dot(x - x_star_);
      sum_[i] += d;
      sum_sq_[i] += d * d;
    }
    ++count_;
  }

  // Fills per-index means scaled by 1/gamma^2 and their standard errors.
  void finish(std::vector<double>& means, std::vector<double>& errors) const {
    const std::size_t n = sum_.size();
    const double c = static_cast<double>(count_);
    const double g2 = gamma_ * gamma_;
    means.assign(n > 0 ? n - 1 : 0, 0.0);
    errors.assign(means.size(), 0.0);
    for (std::size_t i = 1; i < n; ++i) {
      const double m = sum_[i] / c;
      means[i - 1] = m / g2;
      if (count_ > 1) {
        const double var = std::max(0.0, (sum_sq_[i] / c - m * m) * c / (c - 1.0));
        errors[i - 1] = std::sqrt(var / c) / g2;
      }
    }
  }

 private:
  const Problem& problem_;
  Vec x_star_;
  double gamma_;
  std::vector<Vec> grads_;
  std::vector<double> values_at_star_;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  std::size_t count_ = 0;
};

}  // namespace

double variance_at_opt(const Problem& problem, ConstVecRef x_star) {
  if (static_cast<std::size_t>(x_star.size()) != problem.dim()) {
    throw ArgumentError("variance_at_opt: dimension mismatch");
  }
  const std::vector<Vec> g = gradients_at(problem, x_star);
  return population_variance(g, plain_mean(g));
}

std::vector<Vec> limit_points(const Problem& problem, ConstVecRef x_star, double gamma, const Permutation& pi) {
  if (!(gamma > 0.0)) throw ArgumentError("limit_points: gamma must be positive");
  if (pi.size() != problem.size() || !is_permutation_of_iota(pi)) {
    throw ArgumentError("limit_points: not a permutation of the components");
  }
  std::vector<Vec> points;
  points.reserve(pi.size() + 1);
  points.emplace_back(x_star);
  for (const std::size_t j : pi) {
    Vec next = points.back();
    problem.component(j).add_gradient(-gamma, x_star, next);
    points.push_back(std::move(next));
  }
  return points;
}

RadiusEstimate shuffling_radius_empirical(const Problem& problem, ConstVecRef x_star, std::span<const double> gammas,
                                          const RadiusOptions& options) {
  if (gammas.empty()) throw ArgumentError("shuffling_radius_empirical: no stepsizes");
  if (options.num_perms == 0) throw ArgumentError("shuffling_radius_empirical: num_perms must be positive");
  const std::size_t n = problem.size();
  RadiusEstimate best;
  best.exact = n <= options.exact_max_n;
  if (n == 1) {
    best.argmax_gamma = gammas.front();
    return best;
  }

  bool first = true;
  for (const double gamma : gammas) {
    if (!(gamma > 0.0)) throw ArgumentError("shuffling_radius_empirical: gamma must be positive");
    RadiusAccumulator acc(problem, x_star, gamma);
    Permutation perm(n);
    if (best.exact) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      do {
        acc.add(perm);
      } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
      const std::uint64_t base = derive_seed(options.seed, StreamTag::monte_carlo, 0);
      for (std::size_t k = 0; k < options.num_perms; ++k) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        shuffle_with_seed(perm, derive_seed(base, StreamTag::monte_carlo, k));
        acc.add(perm);
      }
    }
    std::vector<double> means;
    std::vector<double> errors;
    acc.finish(means, errors);
    const auto it = std::max_element(means.begin(), means.end());
    if (first || *it > best.value) {
      first = false;
      best.value = *it;
      best.argmax_index = static_cast<std::size_t>(it - means.begin()) + 1;
      best.std_error = best.exact ? 0.0 : errors[best.argmax_index - 1];
      best.argmax_gamma = gamma;
      best.per_index = std::move(means);
    }
  }
  return best;
}

RadiusEstimate shuffling_radius_empirical(const Problem& problem, ConstVecRef x_star, double gamma,
                                          const RadiusOptions& options) {
  const double g[] = {gamma};
  return shuffling_radius_empirical(problem, x_star, std::span<const double>(g), options);
}

double shuffling_radius_bound(const Problem& problem, ConstVecRef x_star) {
  const double n = static_cast<double>(problem.size());
  const double grad_sq = problem.full_gradient(x_star).squaredNorm();
  const double sigma_sq = variance_at_opt(problem, x_star);
  return 0.5 * problem.l_max() * n * (n * grad_sq + 0.5 * sigma_sq);
}

std::vector<double> client_variances(const FederatedProblem& fed, ConstVecRef x_star) {
  std::vector<double> out;
  out.reserve(fed.num_clients());
  for (std::size_t m = 0; m < fed.num_clients(); ++m) out.push_back(variance_at_opt(fed.client_problem(m), x_star));
  return out;
}

std::vector<double> client_gradient_norms_sq(const FederatedProblem& fed, ConstVecRef x_star) {
  std::vector<double> out;
  out.reserve(fed.num_clients());
  for (std::size_t m = 0; m < fed.num_clients(); ++m) {
    Vec g = Vec::Zero(x_star.size());
    for (std::size_t j = 0; j < fed.client_size(m); ++j) fed.client(m)[j]->add_gradient(1.0, x_star, g);
    out.push_back(g.squaredNorm());
  }
  return out;
}

double federated_radius_bound(const FederatedProblem& fed, ConstVecRef x_star) {
  const std::vector<double> var = client_variances(fed, x_star);
  const std::vector<double> grad = client_gradient_norms_sq(fed, x_star);
  const double n = static_cast<double>(fed.padded_size());
  double sum = 0.0;
  for (std::size_t m = 0; m < var.size(); ++m) sum += grad[m] + 0.25 * n * var[m];
  return fed.l_max() * sum;
}

WorStats sampling_wor_closed_form(std::span<const Vec> X, std::size_t i) {
  const std::size_t n = X.size();
  if (n == 0 || i < 1 || i > n) throw ArgumentError("sampling_wor_stats: need 1 <= i <= n");
  const Vec mean = plain_mean(X);
  const double sigma_sq = population_variance(X, mean);
  const double factor = n == 1 ? 0.0
                               : static_cast<double>(n - i) / (static_cast<double>(i) * static_cast<double>(n - 1));
  return {mean, factor * sigma_sq};
}

WorStats sampling_wor_stats(std::span<const Vec> X, std::size_t i, WorMode mode, std::uint64_t seed,
                            std::size_t num_samples) {
  const std::size_t n = X.size();
  if (n == 0 || i < 1 || i > n) throw ArgumentError("sampling_wor_stats: need 1 <= i <= n");
  const Vec full_mean = plain_mean(X);
  Vec mean_acc = Vec::Zero(full_mean.size());
  double var_acc = 0.0;
  std::size_t count = 0;
  const double inv_i = 1.0 / static_cast<double>(i);

  auto visit = [&](const auto& chosen) {
    Vec avg = Vec::Zero(full_mean.size());
    for (std::size_t j = 0; j < i; ++j) avg += X[chosen[j]];
    avg *= inv_i;
    mean_acc += avg;
    var_acc += (avg - full_mean).squaredNorm();
    ++count;
  };

  if (mode == WorMode::exhaustive) {
    if (n > 8) throw ArgumentError("sampling_wor_stats: exhaustive mode needs n <= 8");
    // Each i-subset is the prefix set of the same number of permutations, so
    // averaging over subsets equals averaging over permutations.
    std::vector<bool> select(n, false);
    std::fill(select.begin(), select.begin() + static_cast<std::ptrdiff_t>(i), true);
    std::vector<std::size_t> chosen(i);
    do {
      std::size_t k = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (select[j]) chosen[k++] = j;
      }
      visit(chosen);
    } while (std::prev_permutation(select.begin(), select.end()));
  } else {
    if (num_samples == 0) throw ArgumentError("sampling_wor_stats: num_samples must be positive");
    Permutation perm(n);
    const std::uint64_t base = derive_seed(seed, StreamTag::monte_carlo, 1);
    for (std::size_t s = 0; s < num_samples; ++s) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      shuffle_with_seed(perm, derive_seed(base, StreamTag::monte_carlo, s));
      visit(perm);
    }
  }
  return {mean_acc / static_cast<double>(count), var_acc / static_cast<double>(count)};
}

BoundValue theory_bound(BoundKind kind, const BoundParams& p) {
  switch (kind) {
    case BoundKind::prox_rr_strongly_convex_f: {
      const double g = require(p.gamma, "gamma");
      const double mu = require(p.mu, "mu");
      const double n = static_cast<double>(require(p.n, "n"));
      const double T = static_cast<double>(require(p.epochs, "epochs"));
      const double plateau = 2.0 * g * g * require(p.sigma_rad_sq, "sigma_rad_sq") / mu;
      return {std::pow(1.0 - g * mu, n * T) * require(p.r0, "r0") + plateau, plateau};
    }
    case BoundKind::prox_rr_strongly_convex_psi: {
      const double g = require(p.gamma, "gamma");
      const double mu = require(p.mu, "mu");
      const double n = static_cast<double>(require(p.n, "n"));
      const double T = static_cast<double>(require(p.epochs, "epochs"));
      const double plateau = g * g * require(p.sigma_rad_sq, "sigma_rad_sq") / mu;
      return {std::pow(1.0 + 2.0 * g * mu * n, -T) * require(p.r0, "r0") + plateau, plateau};
    }
    case BoundKind::prox_sgd: {
      const double g = require(p.gamma, "gamma");
      const double mu = require(p.mu, "mu");
      const double K = static_cast<double>(require(p.steps, "steps"));
      const double plateau = 2.0 * g * require(p.sigma_star_sq, "sigma_star_sq") / mu;
      return {std::pow(1.0 - g * mu, K) * require(p.r0, "r0") + plateau, plateau};
    }
    case BoundKind::decreasing_stepsizes: {
      const double mu = require(p.mu, "mu");
      const double n = static_cast<double>(require(p.n, "n"));
      const double T = static_cast<double>(require(p.epochs, "epochs"));
      const double kappa = require(p.l_max, "l_max") / mu;
      const double noise = T > 0.0 ? require(p.sigma_rad_sq, "sigma_rad_sq") / (mu * mu * mu * n * n * T * T)
                                   : 0.0;
      return {std::exp(-n * T / (kappa + 2.0 * n)) * require(p.r0, "r0") + noise, noise};
    }
    case BoundKind::fed_heterogeneous: {
      const double g = require(p.gamma, "gamma");
      const double mu = require(p.mu, "mu");
      const double n = static_cast<double>(require(p.n, "n"));
      const double T = static_cast<double>(require(p.epochs, "epochs"));
      const double M = static_cast<double>(require(p.clients, "clients"));
      const double plateau = g * g * require(p.l_max, "l_max") / (M * mu) * require(p.fed_sum, "fed_sum");
      return {std::pow(1.0 + 2.0 * g * mu * n, -T) * require(p.r0, "r0") + plateau, plateau};
    }
    case BoundKind::fed_iid: {
      const double g = require(p.gamma, "gamma");
      const double mu = require(p.mu, "mu");
      const double n = static_cast<double>(require(p.n, "n"));
      const double T = static_cast<double>(require(p.epochs, "epochs"));
      const double M = static_cast<double>(require(p.clients, "clients"));
      const double N = static_cast<double>(require(p.total, "total"));
      const double plateau = g * g * require(p.l_max, "l_max") * N * require(p.sigma_star_sq, "sigma_star_sq") / (M * mu);
      return {std::pow(1.0 - g * mu, n * T) * require(p.r0, "r0") + plateau, plateau};
    }
    case BoundKind::complexity_rr_f: {
      const double mu = require(p.mu, "mu");
      const double n = static_cast<double>(require(p.n, "n"));
      const double eps = require(p.epsilon, "epsilon");
      const double kappa = require(p.l_max, "l_max") / mu;
      const double spread = std::sqrt(n) * require(p.grad_norm_at_opt, "grad_norm_at_opt") +
                            std::sqrt(require(p.sigma_star_sq, "sigma_star_sq"));
      const double k = (kappa + std::sqrt(kappa * n) / (std::sqrt(eps) * mu) * spread) *
                       std::log(2.0 * require(p.r0, "r0") / eps);
      return {k, 0.0};
    }
    case BoundKind::complexity_sgd: {
      const double mu = require(p.mu, "mu");
      const double eps = require(p.epsilon, "epsilon");
      const double kappa = require(p.l_max, "l_max") / mu;
      const double k = (kappa + require(p.sigma_star_sq, "sigma_star_sq") / (eps * mu * mu)) *
                       std::log(2.0 * require(p.r0, "r0") / eps);
      return {k, 0.0};
    }
    case BoundKind::complexity_rr_psi: {
      const double mu = require(p.mu, "mu");
      const double n = static_cast<double>(require(p.n, "n"));
      const double eps = require(p.epsilon, "epsilon");
      const double kappa = require(p.l_max, "l_max") / mu;
      const double sigma_rad = std::sqrt(require(p.sigma_rad_sq, "sigma_rad_sq"));
      const double k = (kappa + (sigma_rad / mu) / std::sqrt(eps * mu) + n) * std::log(2.0 * require(p.r0, "r0") / eps);
      return {k, 0.0};
    }
  }
  throw ArgumentError("theory_bound: unknown kind");
}

std::vector<double> theory_curve(BoundKind kind, const BoundParams& params) {
  const bool per_step = kind == BoundKind::prox_sgd;
  const std::size_t horizon = per_step ? require(params.steps, "steps") : require(params.epochs, "epochs");
  std::vector<double> curve;
  curve.reserve(horizon + 1);
  BoundParams p = params;
  for (std::size_t t = 0; t <= horizon; ++t) {
    if (per_step) {
      p.steps = t;
    } else {
      p.epochs = t;
    }
    curve.push_back(theory_bound(kind, p).value);
  }
  return curve;
}

}  // namespace proxrr
