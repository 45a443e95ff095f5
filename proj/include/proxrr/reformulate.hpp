#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "proxrr/component.hpp"
#include "proxrr/problem.hpp"

namespace proxrr {

/// Importance-resampled problem. Component i of the base problem is
/// duplicated n_i = ceil(L_i / L_bar) times; the expanded list holds all
/// copies of component 0, then all copies of component 1, and so on.
///
/// Every copy is (N / (n n_i)) f_i, so the expanded average (1/N) sum equals
/// the base average (1/n) sum and the regularizer is unchanged: the two
/// problems have the same objective and the same minimizers. The smoothness
/// of a copy is (N/n) L_i / n_i with L_i / n_i <= L_bar.
struct ResampledProblem {
  Problem problem;
  std::vector<std::size_t> counts;  ///< n_i
  std::vector<std::size_t> origin;  ///< base index of each expanded copy
  std::size_t total = 0;            ///< N = sum n_i
};

/// Throws ArgumentError if any L_i <= 0.
ResampledProblem importance_resample(const Problem& problem);

/// n_i = ceil(L_i / L_bar) for the given constants.
std::vector<std::size_t> resampling_counts(const std::vector<double>& smoothness);

/// f(x_1, ..., x_M) = sum_m f_m(x_m) on the stacked space R^{M d}.
/// Smoothness is max_m L_m; strong convexity min_m lambda_m over the
/// non-padding blocks (padding blocks contribute a zero Hessian block, so
/// the stacked function is only as strongly convex as its weakest block).
class StackedComponent final : public Component {
 public:
  using Component::gradient;

  explicit StackedComponent(std::vector<ComponentPtr> blocks);

  std::size_t dim() const override { return blocks_.size() * block_dim_; }
  double value(ConstVecRef x) const override;
  void gradient(ConstVecRef x, VecRef out) const override;
  void add_gradient(double alpha, ConstVecRef x, VecRef y) const override;
  double smoothness() const override;
  double strong_convexity() const override;
  bool is_zero() const override;

  std::size_t num_blocks() const noexcept { return blocks_.size(); }
  std::size_t block_dim() const noexcept { return block_dim_; }
  const Component& block(std::size_t m) const { return *blocks_[m]; }

 private:
  std::vector<ComponentPtr> blocks_;
  std::size_t block_dim_ = 0;
};

/// min_x (1/N) sum_m F_m(x) + R(x) with F_m = sum_{j < N_m} f_mj, held as
/// M clients padded with zero components to a common length n.
class FederatedProblem {
 public:
  FederatedProblem(std::vector<std::vector<ComponentPtr>> clients, Regularizer R,
                   std::optional<std::size_t> n_override = std::nullopt);

  std::size_t num_clients() const noexcept { return padded_.size(); }  ///< M
  std::size_t padded_size() const noexcept { return n_; }              ///< n = max_m N_m (or override)
  std::size_t total_size() const noexcept { return total_; }           ///< N = sum_m N_m
  std::size_t dim() const noexcept { return dim_; }
  std::size_t client_size(std::size_t m) const { return sizes_[m]; }  ///< N_m
  const std::vector<ComponentPtr>& client(std::size_t m) const { return padded_[m]; }
  const Regularizer& regularizer() const noexcept { return R_; }
  /// max over all real components of L_i.
  double l_max() const noexcept { return l_max_; }

  /// The single-machine problem (1/N) sum_{m,j} f_mj + R on R^d.
  Problem pooled_problem() const;
  /// Client m's own problem (1/N_m) sum_j f_mj + R on R^d (no padding).
  Problem client_problem(std::size_t m) const;
  /// Product-space problem (1/n) sum_i f_i(x) + (N/n)(R + psi_C)(x) on R^{M d},
  /// with f_i stacking the i-th slot of every client.
  Problem stacked_problem() const;

  /// (x, ..., x) in R^{M d}.
  Vec replicate(ConstVecRef x) const;

 private:
  std::vector<std::vector<ComponentPtr>> padded_;
  std::vector<std::size_t> sizes_;
  Regularizer R_;
  std::size_t n_ = 0;
  std::size_t total_ = 0;
  std::size_t dim_ = 0;
  double l_max_ = 0.0;
};

/// Throws ArgumentError on no clients, an empty client, mismatched
/// dimensions, or an n_override smaller than the largest client.
FederatedProblem build_federated(std::vector<std::vector<ComponentPtr>> clients, Regularizer R,
                                 std::optional<std::size_t> n_override = std::nullopt);

}  // namespace proxrr
