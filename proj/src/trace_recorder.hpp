#pragma once

#include <limits>

#include "proxrr/problem.hpp"
#include "proxrr/trace.hpp"

namespace proxrr::detail {

class TraceRecorder {
 public:
  TraceRecorder(const Problem* problem, const TraceOptions& options) : problem_(problem), options_(options) {}

  void record(std::size_t epoch, double stepsize, ConstVecRef x) {
    EpochRecord r;
    r.epoch = epoch;
    r.stepsize = stepsize;
    r.dist_sq = options_.x_star ? (x - *options_.x_star).squaredNorm() : std::numeric_limits<double>::quiet_NaN();
    r.objective = options_.record_objective && problem_ ? problem_->objective(x)
                                                        : std::numeric_limits<double>::quiet_NaN();
    r.grad_calls = grad_calls;
    r.prox_calls = prox_calls;
    r.zero_grad_calls = zero_grad_calls;
    trace_.records.push_back(r);
    if (options_.observer) options_.observer(epoch, x);
  }

  RunTrace take() { return std::move(trace_); }

  std::uint64_t grad_calls = 0;
  std::uint64_t prox_calls = 0;
  std::uint64_t zero_grad_calls = 0;

 private:
  const Problem* problem_;
  const TraceOptions& options_;
  RunTrace trace_;
};

}  // namespace proxrr::detail
