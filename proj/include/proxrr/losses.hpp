#pragma once

#include <cstdint>
#include <vector>

#include "proxrr/component.hpp"
#include "proxrr/problem.hpp"

namespace proxrr {

/// Sparse vector of length `dim` with strictly increasing indices.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::size_t dim = 0;

  double dot(ConstVecRef x) const;
  double squared_norm() const;
  Vec to_dense() const;
};

/// Numerically stable log(1 + exp(t)).
double softplus(double t) noexcept;
/// Numerically stable 1 / (1 + exp(-t)).
double sigmoid(double t) noexcept;

/// Logistic loss -(b log h(a^T x) + (1-b) log(1 - h(a^T x))) + (l2/2)|x|^2.
///
/// The gradient is the scalar (h(a^T x) - b) times the sparse row a, plus
/// l2 x, so add_gradient touches only the nonzeros of a when l2 = 0.
/// Smoothness is |a|^2/4 + l2.
class LogisticComponent final : public Component {
 public:
  using Component::gradient;

  LogisticComponent(SparseVector a, int label, double l2 = 0.0);

  std::size_t dim() const override { return a_.dim; }
  double value(ConstVecRef x) const override;
  void gradient(ConstVecRef x, VecRef out) const override;
  void add_gradient(double alpha, ConstVecRef x, VecRef y) const override;
  double smoothness() const override { return a_.squared_norm() / 4.0 + l2_; }
  double strong_convexity() const override { return l2_; }

  const SparseVector& features() const noexcept { return a_; }
  int label() const noexcept { return label_; }
  double l2() const noexcept { return l2_; }

 private:
  SparseVector a_;
  int label_;
  double l2_;
};

/// f(x) = x^T A x / 2 + c^T x + offset with A symmetric positive semidefinite.
/// L and lambda are the extreme eigenvalues of A, computed once.
class QuadraticComponent final : public Component {
 public:
  using Component::gradient;

  QuadraticComponent(Mat A, Vec c, double offset = 0.0);
  /// (1/2)(x - center)^T A (x - center) + g^T (x - center).
  static QuadraticComponent centered(Mat A, const Vec& center, const Vec& g);

  std::size_t dim() const override { return static_cast<std::size_t>(c_.size()); }
  double value(ConstVecRef x) const override;
  void gradient(ConstVecRef x, VecRef out) const override;
  void add_gradient(double alpha, ConstVecRef x, VecRef y) const override;
  double smoothness() const override { return l_; }
  double strong_convexity() const override { return lambda_; }

  const Mat& hessian() const noexcept { return A_; }
  const Vec& linear() const noexcept { return c_; }

 private:
  Mat A_;
  Vec c_;
  double offset_;
  double l_ = 0.0;
  double lambda_ = 0.0;
};

/// f(x) = <c, x> with a declared (arbitrary positive) smoothness constant.
class LinearComponent final : public Component {
 public:
  using Component::gradient;

  explicit LinearComponent(Vec c, double declared_smoothness = 1.0);

  std::size_t dim() const override { return static_cast<std::size_t>(c_.size()); }
  double value(ConstVecRef x) const override { return c_.dot(x); }
  void gradient(ConstVecRef, VecRef out) const override { out = c_; }
  void add_gradient(double alpha, ConstVecRef, VecRef y) const override { y += alpha * c_; }
  double smoothness() const override { return declared_; }
  double strong_convexity() const override { return 0.0; }

 private:
  Vec c_;
  double declared_;
};

/// Identically zero; pads federated clients to a common size.
class ZeroComponent final : public Component {
 public:
  using Component::gradient;

  explicit ZeroComponent(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const override { return dim_; }
  double value(ConstVecRef) const override { return 0.0; }
  void gradient(ConstVecRef, VecRef out) const override { out.setZero(); }
  void add_gradient(double, ConstVecRef, VecRef) const override {}
  double smoothness() const override { return 0.0; }
  double strong_convexity() const override { return 0.0; }
  bool is_zero() const override { return true; }

 private:
  std::size_t dim_;
};

/// factor * base.
class ScaledComponent final : public Component {
 public:
  using Component::gradient;

  ScaledComponent(ComponentPtr base, double factor);

  std::size_t dim() const override { return base_->dim(); }
  double value(ConstVecRef x) const override { return factor_ * base_->value(x); }
  void gradient(ConstVecRef x, VecRef out) const override;
  void add_gradient(double alpha, ConstVecRef x, VecRef y) const override {
    base_->add_gradient(alpha * factor_, x, y);
  }
  double smoothness() const override { return factor_ * base_->smoothness(); }
  double strong_convexity() const override { return factor_ * base_->strong_convexity(); }
  bool is_zero() const override { return base_->is_zero(); }

  const Component& base() const noexcept { return *base_; }
  double factor() const noexcept { return factor_; }

 private:
  ComponentPtr base_;
  double factor_;
};

struct SmoothnessConstants {
  std::vector<double> per_component;
  double l_max = 0.0;
  double l_bar = 0.0;
};

SmoothnessConstants smoothness_constants(const Problem& problem);

}  // namespace proxrr
