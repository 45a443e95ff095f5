#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "proxrr/harness/config.hpp"
#include "proxrr/harness/dataset.hpp"
#include "proxrr/problem.hpp"
#include "proxrr/reformulate.hpp"
#include "proxrr/trace.hpp"

namespace proxrr::harness {

/// Elastic-net logistic regression assembled from a config, with "auto"
/// regularization resolved.
struct BuiltProblem {
  SparseDataset data;
  double l1 = 0.0;
  double l2 = 0.0;
  Placement placement = Placement::regularizer;
  Problem problem;
};

/// Throws ParseError for unreadable or malformed LIBSVM files.
SparseDataset load_dataset(const DatasetSpec& spec);

/// l2 "auto" is L_max / N with L_max taken over the unregularized losses.
/// l1 "auto" scans lambda_max 2^{-k/4}, k = 48..1 (lambda_max = |grad f(0)|_inf)
/// and keeps the smallest value whose minimizer has fewer than half of its
/// coordinates nonzero.
BuiltProblem build_problem(const ExperimentConfig& config);

/// Federated split of the built problem per config.federated.
FederatedProblem build_federated_problem(const ExperimentConfig& config, const BuiltProblem& built);

enum class CellStatus { ok, diverged, failed };

struct CellResult {
  std::string label;  ///< algorithm name, suffixed by schedule when a name repeats
  AlgorithmName algorithm = AlgorithmName::prox_rr;
  std::uint64_t seed = 0;
  CellStatus status = CellStatus::ok;
  std::string message;
  RunTrace trace;
};

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct ExperimentResult {
  Vec x_star;
  std::size_t n = 0;
  std::vector<CellResult> cells;
  std::vector<Check> checks;

  bool all_cells_ok() const;
};

/// Final mean |x - x_*|^2 must fall below this fraction of the mean r_0 for
/// the `all_converged` check.
inline constexpr double kConvergedFraction = 1e-2;
/// Largest allowed max/min ratio of final errors for `comparable_neighborhoods`.
inline constexpr double kComparableRatio = 10.0;

/// Runs every (algorithm, seed) cell on config.threads workers and writes
/// into config.output:
///   config.json, x_star.csv, <label>_seed<k>.csv per cell, cells.csv,
///   summary.csv (seed-averaged curves) and checks.csv.
/// Divergent cells are recorded and the remaining cells still run.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Reference solution for the configured problem.
Vec solve_reference_for(const ExperimentConfig& config, const BuiltProblem& built);

/// Shuffling-radius report at gamma = 1/L_max as JSON.
nlohmann::json diagnose(const ExperimentConfig& config);

}  // namespace proxrr::harness
