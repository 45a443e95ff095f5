#include "proxrr/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "proxrr/errors.hpp"

namespace proxrr {

namespace {

void require_l_max(const ScheduleParams& p) {
  if (!(p.l_max > 0.0) || !std::isfinite(p.l_max)) throw ArgumentError("stepsize: L_max must be positive");
}

}  // namespace

double constant_stepsize(const ScheduleParams& params, StepsizeRule rule) {
  require_l_max(params);
  return rule == StepsizeRule::shuffling ? 1.0 / params.l_max : 1.0 / (2.0 * params.l_max);
}

double tuned_stepsize_rr(const ScheduleParams& params, TuningRegime regime) {
  require_l_max(params);
  if (!params.epsilon || !(*params.epsilon > 0.0)) throw ArgumentError("tuned stepsize: epsilon required");
  if (!params.sigma_rad) throw ArgumentError("tuned stepsize: sigma_rad required");
  if (!(params.mu > 0.0)) throw ArgumentError("tuned stepsize: mu must be positive");
  const double cap = 1.0 / params.l_max;
  if (*params.sigma_rad <= 0.0) return cap;
  double noise = std::sqrt(*params.epsilon * params.mu) / *params.sigma_rad;
  if (regime == TuningRegime::strongly_convex_components) noise /= std::sqrt(2.0);
  return std::min(cap, noise);
}

double tuned_stepsize_sgd(const ScheduleParams& params) {
  require_l_max(params);
  if (!params.epsilon || !(*params.epsilon > 0.0)) throw ArgumentError("tuned stepsize: epsilon required");
  if (!params.sigma_star) throw ArgumentError("tuned stepsize: sigma_star required");
  const double cap = 1.0 / (2.0 * params.l_max);
  if (*params.sigma_star <= 0.0) return cap;
  const double var = *params.sigma_star * *params.sigma_star;
  return std::min(cap, *params.epsilon * params.mu / (4.0 * var));
}

double decreasing_stepsize(const ScheduleParams& params, std::size_t t) {
  require_l_max(params);
  if (!(params.mu > 0.0)) throw ArgumentError("decreasing stepsize: mu must be positive");
  if (params.n == 0 || params.epochs == 0) throw ArgumentError("decreasing stepsize: n and T must be positive");
  if (t >= params.epochs) throw ArgumentError("decreasing stepsize: epoch index out of range");

  const double cap = 1.0 / params.l_max;
  const double n = static_cast<double>(params.n);
  const double T = static_cast<double>(params.epochs);
  const std::size_t t0 = (params.epochs + 1) / 2;  // ceil(T/2)
  if (T <= params.l_max / (2.0 * params.mu * n) || t <= t0) return cap;

  const double s = 7.0 * params.l_max / (4.0 * params.mu * n);
  const double raw = 7.0 / (params.mu * n * (s + static_cast<double>(t - t0)));
  return std::min(cap, raw);
}

double decreasing_stepsize_sgd(const ScheduleParams& params, std::size_t k) {
  require_l_max(params);
  if (!(params.mu > 0.0)) throw ArgumentError("decreasing SGD stepsize: mu must be positive");
  const double switch_step = 4.0 * std::ceil(params.l_max / params.mu);
  const double kk = static_cast<double>(k);
  if (kk < switch_step) return 1.0 / (2.0 * params.l_max);
  return std::min(1.0 / (2.0 * params.l_max), (2.0 * kk + 1.0) / ((kk + 1.0) * (kk + 1.0) * params.mu));
}

StepsizeSchedule StepsizeSchedule::constant(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ArgumentError("constant schedule: gamma must be positive");
  return StepsizeSchedule([gamma](std::size_t) { return gamma; }, "constant");
}

StepsizeSchedule StepsizeSchedule::decreasing(const ScheduleParams& params) {
  decreasing_stepsize(params, 0);  // validates
  return StepsizeSchedule(
      [params](std::size_t t) { return decreasing_stepsize(params, std::min(t, params.epochs - 1)); },
      "decreasing");
}

}  // namespace proxrr
