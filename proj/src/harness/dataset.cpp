#include "proxrr/harness/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <set>

#include "proxrr/errors.hpp"
#include "proxrr/permutation.hpp"
#include "proxrr/rng.hpp"

namespace proxrr::harness {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view next_token(std::string_view& rest) {
  std::size_t i = 0;
  while (i < rest.size() && is_space(rest[i])) ++i;
  std::size_t j = i;
  while (j < rest.size() && !is_space(rest[j])) ++j;
  std::string_view tok = rest.substr(i, j - i);
  rest.remove_prefix(j);
  return tok;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

struct RawRow {
  double label;
  std::size_t line;
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
};

}  // namespace

bool SparseDataset::operator==(const SparseDataset& other) const {
  if (dim != other.dim || labels != other.labels || rows.size() != other.rows.size()) return false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].indices != other.rows[i].indices || rows[i].values != other.rows[i].values) return false;
  }
  return true;
}

SparseDataset parse_libsvm(std::istream& in, const std::string& source, std::optional<std::size_t> dim) {
  std::vector<RawRow> raw;
  std::set<double> label_set;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    std::string_view tok = next_token(rest);
    if (tok.empty() || tok.front() == '#') continue;

    RawRow row{0.0, line_no, {}, {}};
    if (!parse_number(tok, row.label) || !std::isfinite(row.label)) {
      throw ParseError(source, line_no, "bad label '" + std::string(tok) + "'");
    }
    while (!(tok = next_token(rest)).empty()) {
      if (tok.front() == '#') break;
      const std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(source, line_no, "expected idx:val, got '" + std::string(tok) + "'");
      }
      std::uint64_t idx = 0;
      double val = 0.0;
      if (!parse_number(tok.substr(0, colon), idx)) {
        throw ParseError(source, line_no, "bad index in '" + std::string(tok) + "'");
      }
      if (!parse_number(tok.substr(colon + 1), val) || !std::isfinite(val)) {
        throw ParseError(source, line_no, "bad value in '" + std::string(tok) + "'");
      }
      if (idx == 0) throw ParseError(source, line_no, "feature index 0 (indices are 1-based)");
      if (idx > UINT32_MAX) throw ParseError(source, line_no, "feature index too large");
      if (dim && idx > *dim) {
        throw ParseError(source, line_no, "feature index " + std::to_string(idx) + " exceeds dimension " +
                                              std::to_string(*dim));
      }
      const auto zero_based = static_cast<std::uint32_t>(idx - 1);
      if (!row.indices.empty() && zero_based <= row.indices.back()) {
        throw ParseError(source, line_no, "feature indices not strictly increasing");
      }
      row.indices.push_back(zero_based);
      row.values.push_back(val);
      max_index = std::max<std::size_t>(max_index, idx);
    }
    label_set.insert(row.label);
    raw.push_back(std::move(row));
  }
  if (in.bad()) throw ParseError(source, 0, "read error");

  // Pick the label convention from the observed values.
  const auto subset_of = [&](std::initializer_list<double> allowed) {
    return std::all_of(label_set.begin(), label_set.end(), [&](double v) {
      return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
    });
  };
  double negative = 0.0;
  if (subset_of({-1.0, 1.0})) {
    negative = -1.0;
  } else if (subset_of({0.0, 1.0})) {
    negative = 0.0;
  } else if (subset_of({1.0, 2.0})) {
    negative = 1.0;
  } else {
    // Blame the first line whose label cannot belong to any convention seen so far.
    std::set<double> seen;
    for (const auto& r : raw) {
      seen.insert(r.label);
      const bool known = r.label == -1.0 || r.label == 0.0 || r.label == 1.0 || r.label == 2.0;
      if (!known || seen.size() > 2) {
        throw ParseError(source, r.line, "labels are not binary ({-1,+1}, {0,1} or {1,2})");
      }
    }
    throw ParseError(source, 0, "labels are not binary ({-1,+1}, {0,1} or {1,2})");
  }

  SparseDataset data;
  data.dim = dim.value_or(max_index);
  if (data.dim == 0) data.dim = 1;
  data.rows.reserve(raw.size());
  data.labels.reserve(raw.size());
  for (auto& r : raw) {
    data.labels.push_back(r.label == negative ? 0 : 1);
    data.rows.push_back(SparseVector{std::move(r.indices), std::move(r.values), data.dim});
  }
  return data;
}

SparseDataset parse_libsvm(const std::filesystem::path& path, std::optional<std::size_t> dim) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return parse_libsvm(in, path.string(), dim);
}

SparseDataset synth_logreg(std::size_t n, std::size_t d, double sparsity, double label_noise, std::uint64_t seed) {
  if (n == 0 || d == 0) throw ArgumentError("synth_logreg: n and d must be positive");
  if (!(sparsity > 0.0 && sparsity <= 1.0)) throw ArgumentError("synth_logreg: sparsity must be in (0, 1]");
  if (!(label_noise >= 0.0 && label_noise <= 1.0)) throw ArgumentError("synth_logreg: label_noise must be in [0, 1]");

  Rng weights(seed, StreamTag::dataset, 0);
  Vec w(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = weights.normal();

  const double scale = 1.0 / std::sqrt(sparsity * static_cast<double>(d));
  SparseDataset data;
  data.dim = d;
  data.rows.reserve(n);
  data.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(seed, StreamTag::dataset, i + 1);
    SparseVector a;
    a.dim = d;
    for (std::size_t j = 0; j < d; ++j) {
      if (sparsity < 1.0 && !rng.bernoulli(sparsity)) continue;
      a.indices.push_back(static_cast<std::uint32_t>(j));
      a.values.push_back(scale * rng.normal());
    }
    int label = a.dot(w) > 0.0 ? 1 : 0;
    if (label_noise > 0.0 && rng.bernoulli(label_noise)) label = 1 - label;
    data.rows.push_back(std::move(a));
    data.labels.push_back(label);
  }
  return data;
}

std::vector<ComponentPtr> logistic_components(const SparseDataset& data, double l2_in_loss) {
  std::vector<ComponentPtr> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.push_back(std::make_shared<LogisticComponent>(data.rows[i], data.labels[i], l2_in_loss));
  }
  return out;
}

double misclassification_rate(const SparseDataset& data, ConstVecRef x) {
  if (data.size() == 0) return 0.0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int predicted = data.rows[i].dot(x) > 0.0 ? 1 : 0;
    if (predicted != data.labels[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

std::vector<std::vector<std::size_t>> partition_rows(const SparseDataset& data, std::size_t clients,
                                                     Partition partition, std::uint64_t seed) {
  const std::size_t n = data.size();
  if (clients == 0) throw ArgumentError("partition_rows: need at least one client");
  const std::size_t pieces = partition == Partition::by_shard ? 2 * clients : clients;
  if (n < pieces) throw ArgumentError("partition_rows: fewer rows than clients/shards");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::uint64_t pseed = derive_seed(seed, StreamTag::partition, 0);
  if (partition == Partition::iid) {
    shuffle_with_seed(order, pseed);
  } else {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return data.labels[a] < data.labels[b]; });
  }

  // Contiguous near-equal blocks of `order`.
  auto blocks = [&](std::size_t count) {
    std::vector<std::vector<std::size_t>> out(count);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t lo = k * n / count;
      const std::size_t hi = (k + 1) * n / count;
      out[k].assign(order.begin() + static_cast<std::ptrdiff_t>(lo), order.begin() + static_cast<std::ptrdiff_t>(hi));
    }
    return out;
  };

  std::vector<std::vector<std::size_t>> result(clients);
  switch (partition) {
    case Partition::iid:
      for (std::size_t i = 0; i < n; ++i) result[i % clients].push_back(order[i]);
      for (auto& r : result) std::sort(r.begin(), r.end());
      break;
    case Partition::by_label:
      result = blocks(clients);
      break;
    case Partition::by_shard: {
      auto shards = blocks(pieces);
      std::vector<std::size_t> assign(pieces);
      std::iota(assign.begin(), assign.end(), std::size_t{0});
      shuffle_with_seed(assign, pseed);
      for (std::size_t k = 0; k < pieces; ++k) {
        auto& dst = result[k / 2];
        const auto& src = shards[assign[k]];
        dst.insert(dst.end(), src.begin(), src.end());
      }
      break;
    }
  }
  return result;
}

}  // namespace proxrr::harness
