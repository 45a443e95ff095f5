#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "proxrr/vector.hpp"

namespace proxrr {

struct EpochRecord {
  std::size_t epoch = 0;
  double stepsize = 0.0;
  /// |x_t - x_*|^2, NaN when no x_* was supplied.
  double dist_sq = 0.0;
  /// P(x_t), NaN when objective recording is off.
  double objective = 0.0;
  std::uint64_t grad_calls = 0;
  std::uint64_t prox_calls = 0;
  /// Steps taken on zero padding components (federated runs only).
  std::uint64_t zero_grad_calls = 0;

  bool operator==(const EpochRecord&) const = default;
};

/// Per-epoch metrics. Record 0 describes x_0 (so dist_sq of record 0 is r_0);
/// record t describes the iterate after epoch t.
struct RunTrace {
  std::vector<EpochRecord> records;

  const EpochRecord& back() const { return records.back(); }
  bool empty() const noexcept { return records.empty(); }
  std::size_t size() const noexcept { return records.size(); }
};

struct TraceOptions {
  std::optional<Vec> x_star;
  bool record_objective = true;
  /// Called with (epoch, x_t) whenever a record is written.
  std::function<void(std::size_t, ConstVecRef)> observer;
};

struct RunResult {
  Vec x;
  RunTrace trace;
};

}  // namespace proxrr
