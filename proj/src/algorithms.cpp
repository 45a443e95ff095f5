#include "proxrr/algorithms.hpp"

#include <cmath>

#include "proxrr/errors.hpp"
#include "proxrr/rng.hpp"
#include "trace_recorder.hpp"

namespace proxrr {

namespace {

void validate_start(const Problem& problem, const Vec& x0) {
  if (static_cast<std::size_t>(x0.size()) != problem.dim()) {
    throw ArgumentError("optimizer: x0 has the wrong dimension");
  }
}

double checked_stepsize(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ArgumentError("optimizer: stepsize must be positive");
  return gamma;
}

// Replays one epoch of gradient steps from `start`, checking every step, and
// throws at the first nonfinite iterate. Called only after the cheap
// end-of-epoch check already failed.
[[noreturn]] void locate_divergence(const Problem& problem, const Vec& start, const Permutation& perm,
                                    double gamma, std::size_t epoch) {
  Vec x = start;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    problem.component(perm[i]).add_gradient(-gamma, x, x);
    if (!x.allFinite()) throw DivergenceError(epoch, i);
  }
  throw DivergenceError(epoch, perm.size());
}

}  // namespace

RunResult prox_rr(const Problem& problem, const Vec& x0, const StepsizeSchedule& schedule, std::size_t epochs,
                  PermutationMode mode, std::uint64_t seed, const TraceOptions& trace) {
  validate_start(problem, x0);
  if (epochs == 0) throw ArgumentError("prox_rr: need at least one epoch");

  const std::size_t n = problem.size();
  PermutationStream stream(permutation_stream_seed(seed, 0), n, mode);
  detail::TraceRecorder rec(&problem, trace);

  Vec x = x0;
  Vec start(x.size());
  Permutation perm;
  rec.record(0, 0.0, x);
  for (std::size_t t = 0; t < epochs; ++t) {
    const double gamma = checked_stepsize(schedule(t));
    stream.next_permutation(t, perm);
    start = x;
    for (const std::size_t i : perm) problem.component(i).add_gradient(-gamma, x, x);
    rec.grad_calls += n;
    if (!x.allFinite()) locate_divergence(problem, start, perm, gamma, t);

    problem.regularizer().prox(x, gamma * static_cast<double>(n), x);
    ++rec.prox_calls;
    if (!x.allFinite()) throw DivergenceError(t, n);
    rec.record(t + 1, gamma, x);
  }
  return {std::move(x), rec.take()};
}

RunResult prox_sgd(const Problem& problem, const Vec& x0, const StepFn& stepsizes, std::size_t steps,
                   std::uint64_t seed, const TraceOptions& trace) {
  validate_start(problem, x0);
  if (steps == 0) throw ArgumentError("prox_sgd: need at least one step");

  const std::size_t n = problem.size();
  Rng index_rng(seed, StreamTag::sgd_index, 0);
  detail::TraceRecorder rec(&problem, trace);

  Vec x = x0;
  rec.record(0, 0.0, x);
  double gamma = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    gamma = checked_stepsize(stepsizes(k));
    const auto i = static_cast<std::size_t>(index_rng.below(n));
    problem.component(i).add_gradient(-gamma, x, x);
    problem.regularizer().prox(x, gamma, x);
    ++rec.grad_calls;
    ++rec.prox_calls;
    if (!x.allFinite()) throw DivergenceError(k / n, k % n);
    if ((k + 1) % n == 0) rec.record((k + 1) / n, gamma, x);
  }
  if (steps % n != 0) rec.record(steps / n + 1, gamma, x);
  return {std::move(x), rec.take()};
}

RunResult rr_heuristic(const Problem& problem, const Vec& x0, const StepsizeSchedule& schedule,
                       std::size_t epochs, std::uint64_t seed, const TraceOptions& trace, PermutationMode mode) {
  validate_start(problem, x0);
  if (epochs == 0) throw ArgumentError("rr_heuristic: need at least one epoch");

  const std::size_t n = problem.size();
  PermutationStream stream(permutation_stream_seed(seed, 0), n, mode);
  detail::TraceRecorder rec(&problem, trace);

  Vec x = x0;
  Permutation perm;
  rec.record(0, 0.0, x);
  for (std::size_t t = 0; t < epochs; ++t) {
    const double gamma = checked_stepsize(schedule(t));
    stream.next_permutation(t, perm);
    for (std::size_t step = 0; step < n; ++step) {
      problem.component(perm[step]).add_gradient(-gamma, x, x);
      problem.regularizer().prox(x, gamma, x);
      if (!x.allFinite()) throw DivergenceError(t, step);
    }
    rec.grad_calls += n;
    rec.prox_calls += n;
    rec.record(t + 1, gamma, x);
  }
  return {std::move(x), rec.take()};
}

RunResult prox_gd(const Problem& problem, const Vec& x0, double gamma, std::size_t iterations,
                  const TraceOptions& trace) {
  validate_start(problem, x0);
  checked_stepsize(gamma);

  detail::TraceRecorder rec(&problem, trace);
  Vec x = x0;
  Vec grad(x.size());
  rec.record(0, 0.0, x);
  for (std::size_t k = 0; k < iterations; ++k) {
    problem.full_gradient(x, grad);
    x -= gamma * grad;
    problem.regularizer().prox(x, gamma, x);
    rec.grad_calls += problem.size();
    ++rec.prox_calls;
    if (!x.allFinite()) throw DivergenceError(k, 0);
    rec.record(k + 1, gamma, x);
  }
  return {std::move(x), rec.take()};
}

}  // namespace proxrr
