#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

namespace proxrr {

struct ScheduleParams {
  double l_max = 0.0;
  double mu = 0.0;
  std::size_t n = 1;
  std::size_t epochs = 1;  ///< T
  std::optional<double> epsilon;
  std::optional<double> sigma_rad;   ///< sqrt of the shuffling radius
  std::optional<double> sigma_star;  ///< sqrt of the variance at the optimum
};

enum class StepsizeRule {
  shuffling,  ///< ProxRR / ProxSO / FedRR: gamma <= 1/L_max
  sgd,        ///< ProxSGD: gamma <= 1/(2 L_max)
};

/// Which strong-convexity regime the tuned constant targets.
enum class TuningRegime {
  strongly_convex_components,   ///< min{1/L_max, sqrt(eps mu) / (sqrt 2 sigma_rad)}
  strongly_convex_regularizer,  ///< min{1/L_max, sqrt(eps mu) / sigma_rad}
};

double constant_stepsize(const ScheduleParams& params, StepsizeRule rule = StepsizeRule::shuffling);

/// Throws ArgumentError when epsilon or sigma_rad is missing. sigma_rad = 0
/// gives 1/L_max.
double tuned_stepsize_rr(const ScheduleParams& params, TuningRegime regime);

/// min{1/(2 L_max), eps mu / (4 sigma_star^2)}, which keeps the SGD
/// neighborhood 2 gamma sigma_star^2 / mu at eps / 2.
double tuned_stepsize_sgd(const ScheduleParams& params);

/// Epoch-wise decreasing schedule: 1/L_max while T <= L_max/(2 mu n) or
/// t <= ceil(T/2), afterwards 7 / (mu n (s + t - t0)) with s = 7 L_max/(4 mu n),
/// capped at 1/L_max. Epochs are 0-based; throws unless 0 <= t < T.
double decreasing_stepsize(const ScheduleParams& params, std::size_t t);

/// Step-wise switching schedule for ProxSGD: 1/(2 L_max) for the first
/// 4 ceil(kappa) steps, then (2k + 1) / ((k + 1)^2 mu), which decays like 2/(mu k).
double decreasing_stepsize_sgd(const ScheduleParams& params, std::size_t k);

/// Per-epoch stepsize rule consumed by the shuffling optimizers.
class StepsizeSchedule {
 public:
  using Fn = std::function<double(std::size_t epoch)>;

  StepsizeSchedule(Fn fn, std::string name) : fn_(std::move(fn)), name_(std::move(name)) {}

  static StepsizeSchedule constant(double gamma);
  /// Wraps decreasing_stepsize; epochs >= T repeat the last value.
  static StepsizeSchedule decreasing(const ScheduleParams& params);

  double operator()(std::size_t epoch) const { return fn_(epoch); }
  const std::string& name() const noexcept { return name_; }

 private:
  Fn fn_;
  std::string name_;
};

}  // namespace proxrr
