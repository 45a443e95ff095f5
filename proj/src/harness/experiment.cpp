#include "proxrr/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "proxrr/algorithms.hpp"
#include "proxrr/analysis.hpp"
#include "proxrr/federated.hpp"
#include "proxrr/harness/csv.hpp"
#include "proxrr/losses.hpp"
#include "proxrr/reference.hpp"
#include "proxrr/schedules.hpp"

namespace proxrr::harness {

namespace {

Problem assemble(const SparseDataset& data, double l1, double l2, Placement placement) {
  const bool in_loss = placement == Placement::loss;
  return Problem(logistic_components(data, in_loss ? l2 : 0.0),
                 Regularizer::elastic_net(l1, in_loss ? 0.0 : l2));
}

double nonzero_fraction(const Vec& x) {
  const auto nnz = (x.array() != 0.0).count();
  return static_cast<double>(nnz) / static_cast<double>(x.size());
}

std::vector<std::string> cell_labels(const std::vector<AlgorithmSpec>& algs) {
  std::map<AlgorithmName, int> name_count;
  for (const auto& a : algs) ++name_count[a.name];
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < algs.size(); ++i) {
    std::string label = to_string(algs[i].name);
    if (name_count[algs[i].name] > 1) label += "-" + to_string(algs[i].schedule);
    if (std::count(labels.begin(), labels.end(), label) > 0) label += "-" + std::to_string(i);
    labels.push_back(label);
  }
  return labels;
}

std::string status_name(CellStatus s) {
  switch (s) {
    case CellStatus::ok: return "ok";
    case CellStatus::diverged: return "diverged";
    case CellStatus::failed: return "failed";
  }
  return "failed";
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// Problem-wide quantities shared by all cells, computed once.
struct Context {
  const ExperimentConfig& config;
  const BuiltProblem& built;
  Vec x_star;
  std::optional<FederatedProblem> fed;
  double sigma_rad = 0.0;
  double sigma_star = 0.0;

  ScheduleParams params(const AlgorithmSpec& spec) const {
    ScheduleParams p;
    p.l_max = built.problem.l_max();
    p.mu = built.problem.strong_convexity();
    p.n = built.problem.size();
    p.epochs = config.epochs;
    p.epsilon = spec.epsilon;
    p.sigma_rad = sigma_rad;
    p.sigma_star = sigma_star;
    return p;
  }
};

void require_strong_convexity(const Context& ctx, const AlgorithmSpec& spec) {
  if (spec.schedule != ScheduleKind::constant && !(ctx.built.problem.strong_convexity() > 0.0)) {
    throw ConfigError(to_string(spec.name) + ": " + to_string(spec.schedule) +
                      " schedule needs a strongly convex problem (set l2 > 0)");
  }
}

StepsizeSchedule shuffling_schedule(const Context& ctx, const AlgorithmSpec& spec) {
  const ScheduleParams p = ctx.params(spec);
  switch (spec.schedule) {
    case ScheduleKind::constant:
      return StepsizeSchedule::constant(spec.stepsize.value_or(constant_stepsize(p)));
    case ScheduleKind::decreasing:
      return StepsizeSchedule::decreasing(p);
    case ScheduleKind::tuned: {
      const TuningRegime regime = ctx.built.placement == Placement::loss ? TuningRegime::strongly_convex_components
                                                                          : TuningRegime::strongly_convex_regularizer;
      return StepsizeSchedule::constant(tuned_stepsize_rr(p, regime));
    }
  }
  throw ConfigError("unknown schedule");
}

StepFn sgd_stepsizes(const Context& ctx, const AlgorithmSpec& spec) {
  const ScheduleParams p = ctx.params(spec);
  const double cap = constant_stepsize(p, StepsizeRule::sgd);
  switch (spec.schedule) {
    case ScheduleKind::constant: {
      const double g = spec.stepsize.value_or(cap);
      return [g](std::size_t) { return g; };
    }
    case ScheduleKind::decreasing:
      return [p](std::size_t k) { return decreasing_stepsize_sgd(p, k); };
    case ScheduleKind::tuned: {
      const double g = tuned_stepsize_sgd(p);
      return [g](std::size_t) { return g; };
    }
  }
  throw ConfigError("unknown schedule");
}

RunTrace run_cell(const Context& ctx, const AlgorithmSpec& spec, std::uint64_t seed) {
  const Problem& problem = ctx.built.problem;
  const std::size_t T = ctx.config.epochs;
  const Vec x0 = Vec::Zero(static_cast<Eigen::Index>(problem.dim()));
  TraceOptions trace;
  trace.x_star = ctx.x_star;

  switch (spec.name) {
    case AlgorithmName::prox_rr:
      return prox_rr(problem, x0, shuffling_schedule(ctx, spec), T, PermutationMode::reshuffle, seed, trace).trace;
    case AlgorithmName::prox_so:
      return prox_rr(problem, x0, shuffling_schedule(ctx, spec), T, PermutationMode::shuffle_once, seed, trace).trace;
    case AlgorithmName::rr_heuristic:
      return rr_heuristic(problem, x0, shuffling_schedule(ctx, spec), T, seed, trace).trace;
    case AlgorithmName::prox_sgd:
      return prox_sgd(problem, x0, sgd_stepsizes(ctx, spec), problem.size() * T, seed, trace).trace;
    case AlgorithmName::prox_gd:
      return prox_gd(problem, x0, spec.stepsize.value_or(1.0 / problem.l_max()), T, trace).trace;
    case AlgorithmName::fed_rr:
    case AlgorithmName::fed_so: {
      const FederatedProblem& fed = *ctx.fed;
      FedOptions options;
      options.trace = trace;
      const double gamma = spec.stepsize.value_or(1.0 / fed.l_max());
      const PermutationMode mode =
          spec.name == AlgorithmName::fed_rr ? PermutationMode::reshuffle : PermutationMode::shuffle_once;
      return fed_rr(fed, x0, gamma, T, mode, seed, options).trace;
    }
  }
  throw ConfigError("unknown algorithm");
}

template <class T>
double mean_final(const std::vector<const CellResult*>& cells, T EpochRecord::*field) {
  double s = 0.0;
  for (const auto* c : cells) s += static_cast<double>(c->trace.back().*field);
  return s / static_cast<double>(cells.size());
}

double mean_initial(const std::vector<const CellResult*>& cells) {
  double s = 0.0;
  for (const auto* c : cells) s += c->trace.records.front().dist_sq;
  return s / static_cast<double>(cells.size());
}

std::vector<Check> compute_checks(const std::vector<std::string>& labels, const std::vector<AlgorithmSpec>& algs,
                                  const std::vector<CellResult>& cells, std::size_t n) {
  std::map<std::string, std::vector<const CellResult*>> ok;
  std::size_t failures = 0;
  for (const auto& c : cells) {
    if (c.status == CellStatus::ok) {
      ok[c.label].push_back(&c);
    } else {
      ++failures;
    }
  }

  std::vector<Check> checks;
  checks.push_back({"cell_failures", static_cast<double>(failures), 0.0, failures == 0});

  double worst = 0.0;
  bool any = false;
  for (const auto& label : labels) {
    if (ok[label].empty()) continue;
    const double r0 = mean_initial(ok[label]);
    if (!(r0 > 0.0)) continue;
    worst = std::max(worst, mean_final(ok[label], &EpochRecord::dist_sq) / r0);
    any = true;
  }
  if (any) checks.push_back({"all_converged", worst, kConvergedFraction, worst <= kConvergedFraction});

  // Prox-call economics and neighborhoods relative to the first ProxRR entry.
  std::optional<std::string> rr_label;
  for (std::size_t i = 0; i < algs.size(); ++i) {
    if (algs[i].name == AlgorithmName::prox_rr && !ok[labels[i]].empty()) {
      rr_label = labels[i];
      break;
    }
  }
  if (!rr_label) return checks;
  const double rr_prox = mean_final(ok[*rr_label], &EpochRecord::prox_calls);
  double lo = mean_final(ok[*rr_label], &EpochRecord::dist_sq);
  double hi = lo;
  bool compared = false;
  for (std::size_t i = 0; i < algs.size(); ++i) {
    const auto name = algs[i].name;
    if (name != AlgorithmName::prox_sgd && name != AlgorithmName::rr_heuristic) continue;
    if (ok[labels[i]].empty()) continue;
    const double ratio = mean_final(ok[labels[i]], &EpochRecord::prox_calls) / rr_prox;
    const double expected = static_cast<double>(n);
    checks.push_back({"prox_call_ratio_" + labels[i], ratio, expected, ratio == expected});
    const double err = mean_final(ok[labels[i]], &EpochRecord::dist_sq);
    lo = std::min(lo, err);
    hi = std::max(hi, err);
    compared = true;
  }
  if (compared) {
    const double spread = lo > 0.0 ? hi / lo : (hi > 0.0 ? INFINITY : 1.0);
    checks.push_back({"comparable_neighborhoods", spread, kComparableRatio, spread <= kComparableRatio});
  }
  return checks;
}

void write_summary(const std::filesystem::path& path, const std::vector<std::string>& labels,
                   const std::vector<CellResult>& cells) {
  CsvWriter w(path, {"algorithm", "epoch", "stepsize", "mean_dist_sq", "mean_objective", "mean_grad_calls",
                     "mean_prox_calls", "seeds"});
  for (const auto& label : labels) {
    std::vector<const CellResult*> group;
    for (const auto& c : cells) {
      if (c.label == label && c.status == CellStatus::ok) group.push_back(&c);
    }
    if (group.empty()) continue;
    const std::size_t len = group.front()->trace.size();
    const double k = static_cast<double>(group.size());
    for (std::size_t t = 0; t < len; ++t) {
      double step = 0.0, dist = 0.0, obj = 0.0, grads = 0.0, proxes = 0.0;
      for (const auto* c : group) {
        const auto& r = c->trace.records[t];
        step += r.stepsize;
        dist += r.dist_sq;
        obj += r.objective;
        grads += static_cast<double>(r.grad_calls);
        proxes += static_cast<double>(r.prox_calls);
      }
      w.field(label).field(std::uint64_t{group.front()->trace.records[t].epoch});
      w.field(step / k).field(dist / k).field(obj / k).field(grads / k).field(proxes / k);
      w.field(std::uint64_t{group.size()});
      w.end_row();
    }
  }
  w.close();
}

}  // namespace

bool ExperimentResult::all_cells_ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.status == CellStatus::ok; });
}

SparseDataset load_dataset(const DatasetSpec& spec) {
  if (spec.kind == DatasetKind::libsvm) return parse_libsvm(std::filesystem::path(spec.path), spec.dim);
  return synth_logreg(spec.n, spec.d, spec.sparsity, spec.label_noise, spec.seed);
}

BuiltProblem build_problem(const ExperimentConfig& config) {
  SparseDataset data = load_dataset(config.dataset);
  if (data.size() == 0) throw ParseError(config.dataset.path, 0, "dataset has no rows");
  const auto& reg = config.regularization;

  double l2 = 0.0;
  if (reg.l2) {
    l2 = *reg.l2;
  } else {
    const Problem plain = assemble(data, 0.0, 0.0, Placement::regularizer);
    l2 = plain.l_max() / static_cast<double>(data.size());
  }

  double l1 = reg.l1.value_or(0.0);
  if (!reg.l1) {
    const Problem smooth = assemble(data, 0.0, l2, reg.placement);
    const double lambda_max = smooth.full_gradient(Vec::Zero(static_cast<Eigen::Index>(smooth.dim()))).lpNorm<Eigen::Infinity>();
    ReferenceOptions opts{std::max(config.reference.tol, 1e-8), config.reference.max_iters};
    l1 = lambda_max;
    // Quarter-octave grid; lambda_max itself zeroes x_* and is only the fallback.
    for (int k = 48; k >= 1; --k) {
      const double candidate = lambda_max * std::exp2(-0.25 * k);
      const Vec x = solve_reference(assemble(data, candidate, l2, reg.placement), opts);
      if (nonzero_fraction(x) < 0.5) {
        l1 = candidate;
        break;
      }
    }
  }
  Problem problem = assemble(data, l1, l2, reg.placement);
  return BuiltProblem{std::move(data), l1, l2, reg.placement, std::move(problem)};
}

FederatedProblem build_federated_problem(const ExperimentConfig& config, const BuiltProblem& built) {
  if (!config.federated) throw ConfigError("no federated block in config");
  const auto groups =
      partition_rows(built.data, config.federated->clients, config.federated->partition, config.federated->seed);
  std::vector<std::vector<ComponentPtr>> clients;
  for (const auto& g : groups) {
    std::vector<ComponentPtr> comps;
    comps.reserve(g.size());
    for (const std::size_t i : g) comps.push_back(built.problem.components()[i]);
    clients.push_back(std::move(comps));
  }
  return build_federated(std::move(clients), built.problem.regularizer());
}

Vec solve_reference_for(const ExperimentConfig& config, const BuiltProblem& built) {
  return solve_reference(built.problem, ReferenceOptions{config.reference.tol, config.reference.max_iters});
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const BuiltProblem built = build_problem(config);
  const std::filesystem::path out(config.output);
  std::filesystem::create_directories(out);
  {
    std::ofstream cfg(out / "config.json", std::ios::binary | std::ios::trunc);
    cfg << to_json(config).dump(2) << '\n';
    if (!cfg) throw std::runtime_error("cannot write " + (out / "config.json").string());
  }

  Context ctx{config, built, solve_reference_for(config, built), std::nullopt, 0.0, 0.0};
  write_vector_csv(out / "x_star.csv", ctx.x_star);

  const bool needs_fed = std::any_of(config.algorithms.begin(), config.algorithms.end(), [](const AlgorithmSpec& a) {
    return a.name == AlgorithmName::fed_rr || a.name == AlgorithmName::fed_so;
  });
  if (needs_fed) ctx.fed = build_federated_problem(config, built);
  const bool needs_tuning = std::any_of(config.algorithms.begin(), config.algorithms.end(),
                                        [](const AlgorithmSpec& a) { return a.schedule == ScheduleKind::tuned; });
  if (needs_tuning) {
    RadiusOptions ro;
    ro.num_perms = config.diagnose.num_perms;
    ro.exact_max_n = config.diagnose.exact_max_n;
    ctx.sigma_rad = std::sqrt(shuffling_radius_empirical(built.problem, ctx.x_star, 1.0 / built.problem.l_max(), ro).value);
    ctx.sigma_star = std::sqrt(variance_at_opt(built.problem, ctx.x_star));
  }
  for (const auto& a : config.algorithms) require_strong_convexity(ctx, a);

  const auto labels = cell_labels(config.algorithms);
  ExperimentResult result;
  result.x_star = ctx.x_star;
  result.n = built.problem.size();
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    for (const std::uint64_t seed : config.seeds) {
      CellResult cell;
      cell.label = labels[a];
      cell.algorithm = config.algorithms[a].name;
      cell.seed = seed;
      result.cells.push_back(std::move(cell));
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < result.cells.size();) {
      CellResult& cell = result.cells[k];
      const AlgorithmSpec& spec = config.algorithms[k / config.seeds.size()];
      try {
        cell.trace = run_cell(ctx, spec, cell.seed);
        write_trace_csv(out / (cell.label + "_seed" + std::to_string(cell.seed) + ".csv"), cell.trace);
      } catch (const DivergenceError& e) {
        cell.status = CellStatus::diverged;
        cell.message = e.what();
      } catch (const std::exception& e) {
        cell.status = CellStatus::failed;
        cell.message = e.what();
      }
    }
  };
  std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, result.cells.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }

  CsvWriter cells_csv(out / "cells.csv", {"algorithm", "seed", "status", "final_dist_sq", "final_objective",
                                          "grad_calls", "prox_calls", "message"});
  for (const auto& c : result.cells) {
    cells_csv.field(c.label).field(c.seed).field(status_name(c.status));
    if (c.status == CellStatus::ok) {
      const auto& r = c.trace.back();
      cells_csv.field(r.dist_sq).field(r.objective).field(r.grad_calls).field(r.prox_calls);
    } else {
      cells_csv.field("").field("").field("").field("");
    }
    cells_csv.field(csv_safe(c.message));
    cells_csv.end_row();
  }
  cells_csv.close();

  write_summary(out / "summary.csv", labels, result.cells);
  result.checks = compute_checks(labels, config.algorithms, result.cells, result.n);
  CsvWriter checks_csv(out / "checks.csv", {"check", "value", "threshold", "pass"});
  for (const auto& c : result.checks) {
    checks_csv.field(c.name).field(c.value).field(c.threshold).field(c.pass ? "true" : "false");
    checks_csv.end_row();
  }
  checks_csv.close();
  return result;
}

nlohmann::json diagnose(const ExperimentConfig& config) {
  validate(config);
  const BuiltProblem built = build_problem(config);
  const Problem& problem = built.problem;
  const Vec x_star = solve_reference_for(config, built);
  const double gamma = 1.0 / problem.l_max();
  RadiusOptions ro;
  ro.num_perms = config.diagnose.num_perms;
  ro.exact_max_n = config.diagnose.exact_max_n;
  const RadiusEstimate radius = shuffling_radius_empirical(problem, x_star, gamma, ro);
  const double bound = shuffling_radius_bound(problem, x_star);

  nlohmann::json j;
  j["n"] = problem.size();
  j["d"] = problem.dim();
  j["l1"] = built.l1;
  j["l2"] = built.l2;
  j["l_max"] = problem.l_max();
  j["l_bar"] = problem.l_bar();
  j["mu"] = problem.strong_convexity();
  j["objective_at_opt"] = problem.objective(x_star);
  j["nonzero_fraction"] = nonzero_fraction(x_star);
  j["grad_norm_at_opt"] = problem.full_gradient(x_star).norm();
  j["sigma_star_sq"] = variance_at_opt(problem, x_star);
  j["gamma"] = gamma;
  j["shuffling_radius"] = {{"value", radius.value},
                           {"std_error", radius.std_error},
                           {"exact", radius.exact},
                           {"argmax_index", radius.argmax_index},
                           {"num_perms", radius.exact ? 0 : ro.num_perms}};
  j["shuffling_radius_bound"] = bound;
  j["bound_dominates"] = bound >= radius.value;
  if (config.federated) {
    const FederatedProblem fed = build_federated_problem(config, built);
    j["federated"] = {{"clients", fed.num_clients()},
                      {"padded_size", fed.padded_size()},
                      {"client_variances", client_variances(fed, x_star)},
                      {"client_gradient_norms_sq", client_gradient_norms_sq(fed, x_star)},
                      {"radius_bound", federated_radius_bound(fed, x_star)}};
  }
  return j;
}

}  // namespace proxrr::harness
