#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "proxrr/permutation.hpp"
#include "proxrr/problem.hpp"
#include "proxrr/schedules.hpp"
#include "proxrr/trace.hpp"

namespace proxrr {

/// Proximal Random Reshuffling / Shuffle-Once.
///
/// Each epoch runs n plain gradient steps x <- x - gamma_t grad f_{pi_i}(x)
/// along the epoch's permutation, then a single prox with scale gamma_t * n.
/// Permutations come from PermutationStream(permutation_stream_seed(seed, 0), n, mode).
/// Throws DivergenceError naming the first nonfinite epoch/step.
RunResult prox_rr(const Problem& problem, const Vec& x0, const StepsizeSchedule& schedule, std::size_t epochs,
                  PermutationMode mode, std::uint64_t seed, const TraceOptions& trace = {});

/// Stepsize of ProxSGD step k.
using StepFn = std::function<double(std::size_t step)>;

/// Proximal SGD: x <- prox_{gamma_k psi}(x - gamma_k grad f_{i_k}(x)) with i_k
/// uniform with replacement from Rng(seed, StreamTag::sgd_index, 0).
/// A trace record is written every n steps (one epoch-equivalent) and after
/// the final step.
RunResult prox_sgd(const Problem& problem, const Vec& x0, const StepFn& stepsizes, std::size_t steps,
                   std::uint64_t seed, const TraceOptions& trace = {});

/// Random reshuffling with a prox after every step ("RR (heuristic)"):
/// x <- prox_{gamma_t psi}(x - gamma_t grad f_{pi_i}(x)), no end-of-epoch prox.
RunResult rr_heuristic(const Problem& problem, const Vec& x0, const StepsizeSchedule& schedule,
                       std::size_t epochs, std::uint64_t seed, const TraceOptions& trace = {},
                       PermutationMode mode = PermutationMode::reshuffle);

/// Deterministic proximal gradient descent x <- prox_{gamma psi}(x - gamma grad f(x)).
/// One trace record per iteration.
RunResult prox_gd(const Problem& problem, const Vec& x0, double gamma, std::size_t iterations,
                  const TraceOptions& trace = {});

}  // namespace proxrr
