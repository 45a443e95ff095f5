#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "proxrr/errors.hpp"
#include "proxrr/harness/dataset.hpp"

namespace proxrr::harness {

/// Invalid experiment configuration.
class ConfigError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

enum class DatasetKind { synthetic, libsvm };

struct DatasetSpec {
  DatasetKind kind = DatasetKind::synthetic;
  std::string path;                  ///< libsvm only
  std::optional<std::size_t> dim;    ///< libsvm only; inferred when absent
  std::size_t n = 200;               ///< synthetic only
  std::size_t d = 20;
  double sparsity = 0.5;
  double label_noise = 0.05;
  std::uint64_t seed = 0;

  bool operator==(const DatasetSpec&) const = default;
};

/// Where the ridge term lives: in psi, or inside every logistic component.
enum class Placement { regularizer, loss };

struct RegularizationSpec {
  std::optional<double> l1;  ///< nullopt: "auto", the smallest grid value giving < 50% nonzeros in x_*
  std::optional<double> l2;  ///< nullopt: "auto", L_max / N
  Placement placement = Placement::regularizer;

  bool operator==(const RegularizationSpec&) const = default;
};

enum class AlgorithmName { prox_rr, prox_so, prox_sgd, rr_heuristic, prox_gd, fed_rr, fed_so };
enum class ScheduleKind { constant, decreasing, tuned };

struct AlgorithmSpec {
  AlgorithmName name = AlgorithmName::prox_rr;
  ScheduleKind schedule = ScheduleKind::constant;
  std::optional<double> stepsize;  ///< overrides the theoretical constant
  std::optional<double> epsilon;   ///< target accuracy for "tuned"

  bool operator==(const AlgorithmSpec&) const = default;
};

struct FederatedSpec {
  std::size_t clients = 2;
  Partition partition = Partition::iid;
  std::uint64_t seed = 0;

  bool operator==(const FederatedSpec&) const = default;
};

struct ReferenceSpec {
  double tol = 1e-10;
  std::size_t max_iters = 1'000'000;

  bool operator==(const ReferenceSpec&) const = default;
};

struct DiagnoseSpec {
  std::size_t num_perms = 1000;
  std::size_t exact_max_n = 6;

  bool operator==(const DiagnoseSpec&) const = default;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  RegularizationSpec regularization;
  std::vector<AlgorithmSpec> algorithms;
  std::size_t epochs = 0;  ///< T; ProxSGD runs n T steps
  std::vector<std::uint64_t> seeds{0};
  std::optional<FederatedSpec> federated;
  ReferenceSpec reference;
  DiagnoseSpec diagnose;
  std::string output = "out";
  std::size_t threads = 0;  ///< 0: hardware concurrency

  bool operator==(const ExperimentConfig&) const = default;
};

/// Strict: unknown keys and wrong types are ConfigErrors. Validates.
ExperimentConfig parse_config(const nlohmann::json& j);
/// Every field written explicitly, so parse_config(to_json(c)) == c.
nlohmann::json to_json(const ExperimentConfig& config);
/// Reads and parses a JSON file. Unreadable or malformed files are ConfigErrors.
ExperimentConfig load_config(const std::filesystem::path& path);
/// Throws ConfigError on an empty budget, no algorithms, no seeds,
/// non-positive numbers, or a federated algorithm without a federated block.
void validate(const ExperimentConfig& config);

std::string to_string(AlgorithmName name);
std::string to_string(ScheduleKind kind);

}  // namespace proxrr::harness
