#include "proxrr/federated.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "proxrr/algorithms.hpp"
#include "proxrr/errors.hpp"
#include "proxrr/prox.hpp"
#include "trace_recorder.hpp"

namespace proxrr {

namespace {

struct ClientState {
  std::size_t id = 0;
  Vec x;
  Vec start;
  PermutationStream stream;
  Permutation perm;
  ClientCounters counters;
  std::exception_ptr error;
};

void run_local_epoch(const FederatedProblem& fed, ClientState& c, const Vec& server, double gamma,
                     std::size_t epoch) {
  const auto& slots = fed.client(c.id);
  c.x = server;
  c.stream.next_permutation(epoch, c.perm);
  for (const std::size_t i : c.perm) {
    if (slots[i]->is_zero()) {
      ++c.counters.zero_grad_calls;
      continue;
    }
    slots[i]->add_gradient(-gamma, c.x, c.x);
    ++c.counters.grad_calls;
  }
  if (c.x.allFinite()) return;

  Vec x = server;
  for (std::size_t step = 0; step < c.perm.size(); ++step) {
    slots[c.perm[step]]->add_gradient(-gamma, x, x);
    if (!x.allFinite()) throw DivergenceError(epoch, step, c.id);
  }
  throw DivergenceError(epoch, c.perm.size(), c.id);
}

}  // namespace

FedRunResult fed_rr(const FederatedProblem& fed, const Vec& x0, double gamma, std::size_t epochs,
                    PermutationMode mode, std::uint64_t seed, const FedOptions& options) {
  if (static_cast<std::size_t>(x0.size()) != fed.dim()) throw ArgumentError("fed_rr: x0 has the wrong dimension");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ArgumentError("fed_rr: stepsize must be positive");
  if (epochs == 0) throw ArgumentError("fed_rr: need at least one epoch");

  const std::size_t M = fed.num_clients();
  const std::size_t n = fed.padded_size();
  std::vector<ClientState> clients;
  clients.reserve(M);
  for (std::size_t m = 0; m < M; ++m) {
    const std::size_t stream = options.sharing == PermutationSharing::independent ? m : 0;
    clients.push_back(ClientState{m, Vec(), Vec(), PermutationStream(permutation_stream_seed(seed, stream), n, mode),
                                  Permutation(), ClientCounters{}, nullptr});
  }

  const Problem pooled = fed.pooled_problem();
  detail::TraceRecorder rec(&pooled, options.trace);
  const double server_scale = gamma * (static_cast<double>(fed.total_size()) / static_cast<double>(M));

  std::size_t workers = 1;
  if (options.parallel) {
    workers = options.threads > 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, M);
  }

  Vec x = x0;
  std::vector<Vec> locals(M);
  rec.record(0, 0.0, x);
  for (std::size_t t = 0; t < epochs; ++t) {
    auto work = [&](std::size_t first) {
      for (std::size_t m = first; m < M; m += workers) {
        try {
          run_local_epoch(fed, clients[m], x, gamma, t);
        } catch (...) {
          clients[m].error = std::current_exception();
        }
      }
    };
    if (workers <= 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (auto& c : clients) {
      if (c.error) std::rethrow_exception(c.error);
    }

    for (std::size_t m = 0; m < M; ++m) locals[m].swap(clients[m].x);
    x = pairwise_mean(locals);
    fed.regularizer().prox(x, server_scale, x);
    ++rec.prox_calls;
    if (!x.allFinite()) throw DivergenceError(t, n);

    rec.grad_calls = 0;
    rec.zero_grad_calls = 0;
    for (const auto& c : clients) {
      rec.grad_calls += c.counters.grad_calls;
      rec.zero_grad_calls += c.counters.zero_grad_calls;
    }
    rec.record(t + 1, gamma, x);
  }

  FedRunResult out{std::move(x), rec.take(), {}};
  for (const auto& c : clients) out.clients.push_back(c.counters);
  return out;
}

bool equivalence_check(const FederatedProblem& fed, const Vec& x0, double gamma, std::size_t epochs,
                       std::uint64_t seed, PermutationSharing sharing) {
  std::vector<Vec> stacked_iterates;
  std::vector<Vec> fed_iterates;

  TraceOptions stacked_trace;
  stacked_trace.record_objective = false;
  stacked_trace.observer = [&](std::size_t, ConstVecRef x) { stacked_iterates.emplace_back(x); };
  const Problem stacked = fed.stacked_problem();
  prox_rr(stacked, fed.replicate(x0), StepsizeSchedule::constant(gamma), epochs, PermutationMode::reshuffle, seed,
          stacked_trace);

  FedOptions fed_options;
  fed_options.sharing = sharing;
  fed_options.trace.record_objective = false;
  fed_options.trace.observer = [&](std::size_t, ConstVecRef x) { fed_iterates.emplace_back(x); };
  fed_rr(fed, x0, gamma, epochs, PermutationMode::reshuffle, seed, fed_options);

  if (stacked_iterates.size() != fed_iterates.size()) return false;
  const auto d = static_cast<Eigen::Index>(fed.dim());
  for (std::size_t t = 0; t < fed_iterates.size(); ++t) {
    const Vec& z = fed_iterates[t];
    const double tol = 1e-12 * std::max(1.0, z.lpNorm<Eigen::Infinity>());
    for (std::size_t m = 0; m < fed.num_clients(); ++m) {
      const auto block = stacked_iterates[t].segment(static_cast<Eigen::Index>(m) * d, d);
      if ((block - z).lpNorm<Eigen::Infinity>() > tol) return false;
    }
  }
  return true;
}

}  // namespace proxrr
