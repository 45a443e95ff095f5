#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "proxrr/permutation.hpp"
#include "proxrr/reformulate.hpp"
#include "proxrr/trace.hpp"

namespace proxrr {

enum class PermutationSharing {
  /// Client m draws from permutation stream m (Algorithm as deployed).
  independent,
  /// Every client draws from stream 0, i.e. one slot permutation per epoch
  /// shared by all blocks. This is the convention under which FedRR is
  /// literally ProxRR on the stacked problem.
  synchronized,
};

struct FedOptions {
  bool parallel = false;
  std::size_t threads = 0;  ///< 0: hardware concurrency
  PermutationSharing sharing = PermutationSharing::independent;
  TraceOptions trace;       ///< x_star and objective refer to the pooled problem on R^d
};

struct ClientCounters {
  std::uint64_t grad_calls = 0;       ///< steps on real components
  std::uint64_t zero_grad_calls = 0;  ///< steps on padding
};

struct FedRunResult {
  Vec x;
  RunTrace trace;
  std::vector<ClientCounters> clients;
};

/// Federated Random Reshuffling / Shuffle-Once.
///
/// Each epoch every client starts from the server model, walks its n padded
/// slots in the order of its own permutation (padding slots are zero-gradient
/// steps, counted separately), the server averages the M local models in
/// client-index order by pairwise summation and applies prox_{gamma (N/M) R}.
/// Client m's permutations come from permutation_stream_seed(seed, m)
/// (stream 0 for all clients under PermutationSharing::synchronized), so with
/// M = 1 the trajectory is bitwise that of prox_rr on the client problem
/// with regularizer (N/n) R. Results do not depend on `parallel`.
FedRunResult fed_rr(const FederatedProblem& fed, const Vec& x0, double gamma, std::size_t epochs,
                    PermutationMode mode, std::uint64_t seed, const FedOptions& options = {});

/// Runs prox_rr on fed.stacked_problem() from (x0, ..., x0) and fed_rr
/// directly, both in reshuffle mode with the same seed, and reports whether
/// every block of every stacked iterate matches the federated iterate to
/// 1e-12 (relative to max(1, |x|)) at every epoch.
bool equivalence_check(const FederatedProblem& fed, const Vec& x0, double gamma, std::size_t epochs,
                       std::uint64_t seed, PermutationSharing sharing = PermutationSharing::synchronized);

}  // namespace proxrr
