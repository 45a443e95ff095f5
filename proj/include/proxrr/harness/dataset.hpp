#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "proxrr/component.hpp"
#include "proxrr/losses.hpp"

namespace proxrr::harness {

/// Binary classification data with sparse rows. Labels are 0 or 1.
struct SparseDataset {
  std::vector<SparseVector> rows;
  std::vector<int> labels;
  std::size_t dim = 0;

  std::size_t size() const noexcept { return rows.size(); }
  bool operator==(const SparseDataset& other) const;
};

/// Reads LIBSVM text ("label idx:val idx:val ..."). Indices are 1-based in
/// the file and 0-based in the result and must be strictly increasing on a
/// line. Label sets {-1,+1}, {0,1} and {1,2} are mapped to {0,1}. Blank lines
/// and lines starting with '#' are skipped. When `dim` is given, indices
/// beyond it are rejected; otherwise the dimension is the largest index.
/// Throws ParseError naming the source and line.
SparseDataset parse_libsvm(std::istream& in, const std::string& source = "<stream>",
                           std::optional<std::size_t> dim = std::nullopt);
SparseDataset parse_libsvm(const std::filesystem::path& path, std::optional<std::size_t> dim = std::nullopt);

/// Synthetic logistic-regression data from a planted Gaussian weight vector.
/// Each coordinate of a row is present with probability `sparsity` (1 gives
/// dense rows) and drawn N(0, 1/(sparsity d)), so E|a|^2 = 1. The label is
/// 1{a^T w > 0}, flipped with probability `label_noise`.
SparseDataset synth_logreg(std::size_t n, std::size_t d, double sparsity, double label_noise, std::uint64_t seed);

/// One LogisticComponent per row, each carrying ridge `l2_in_loss`.
std::vector<ComponentPtr> logistic_components(const SparseDataset& data, double l2_in_loss = 0.0);

/// Fraction of rows with 1{a^T x > 0} != label.
double misclassification_rate(const SparseDataset& data, ConstVecRef x);

enum class Partition { iid, by_label, by_shard };

/// Splits row indices into `clients` groups:
///  - iid: shuffled, then dealt round-robin;
///  - by_label: stably sorted by label, then cut into contiguous blocks;
///  - by_shard: sorted by label, cut into 2*clients shards, two random shards each.
/// Throws ArgumentError when a client would be empty.
std::vector<std::vector<std::size_t>> partition_rows(const SparseDataset& data, std::size_t clients,
                                                     Partition partition, std::uint64_t seed);

}  // namespace proxrr::harness
