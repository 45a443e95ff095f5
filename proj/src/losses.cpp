#include "proxrr/losses.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "proxrr/errors.hpp"

namespace proxrr {

double SparseVector::dot(ConstVecRef x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) s += values[k] * x[indices[k]];
  return s;
}

double SparseVector::squared_norm() const {
  double s = 0.0;
  for (const double v : values) s += v * v;
  return s;
}

Vec SparseVector::to_dense() const {
  Vec out = Vec::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < indices.size(); ++k) out[indices[k]] = values[k];
  return out;
}

double softplus(double t) noexcept {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) noexcept {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

LogisticComponent::LogisticComponent(SparseVector a, int label, double l2)
    : a_(std::move(a)), label_(label), l2_(l2) {
  if (label_ != 0 && label_ != 1) throw ArgumentError("LogisticComponent: label must be 0 or 1");
  if (l2_ < 0.0) throw ArgumentError("LogisticComponent: negative l2");
  if (a_.indices.size() != a_.values.size()) throw ArgumentError("LogisticComponent: ragged sparse row");
  for (std::size_t k = 0; k < a_.indices.size(); ++k) {
    if (a_.indices[k] >= a_.dim) throw ArgumentError("LogisticComponent: feature index out of range");
    if (k > 0 && a_.indices[k] <= a_.indices[k - 1]) {
      throw ArgumentError("LogisticComponent: feature indices must be strictly increasing");
    }
  }
}

double LogisticComponent::value(ConstVecRef x) const {
  const double z = a_.dot(x);
  const double loss = label_ == 1 ? softplus(-z) : softplus(z);
  return l2_ > 0.0 ? loss + 0.5 * l2_ * x.squaredNorm() : loss;
}

void LogisticComponent::gradient(ConstVecRef x, VecRef out) const {
  if (l2_ > 0.0) {
    out = l2_ * x;
  } else {
    out.setZero();
  }
  const double z = a_.dot(x);
  const double scale = label_ == 1 ? -sigmoid(-z) : sigmoid(z);
  for (std::size_t k = 0; k < a_.indices.size(); ++k) out[a_.indices[k]] += scale * a_.values[k];
}

void LogisticComponent::add_gradient(double alpha, ConstVecRef x, VecRef y) const {
  const double z = a_.dot(x);
  const double scale = alpha * (label_ == 1 ? -sigmoid(-z) : sigmoid(z));
  // Elementwise, so safe when y aliases x.
  if (l2_ > 0.0) y += (alpha * l2_) * x;
  for (std::size_t k = 0; k < a_.indices.size(); ++k) y[a_.indices[k]] += scale * a_.values[k];
}

QuadraticComponent::QuadraticComponent(Mat A, Vec c, double offset)
    : A_(std::move(A)), c_(std::move(c)), offset_(offset) {
  if (A_.rows() != A_.cols() || A_.rows() != c_.size()) {
    throw ArgumentError("QuadraticComponent: shape mismatch");
  }
  if (c_.size() == 0) throw ArgumentError("QuadraticComponent: empty");
  if ((A_ - A_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, A_.cwiseAbs().maxCoeff())) {
    throw ArgumentError("QuadraticComponent: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(A_, Eigen::EigenvaluesOnly);
  lambda_ = eig.eigenvalues().minCoeff();
  l_ = eig.eigenvalues().maxCoeff();
  if (lambda_ < -1e-12 * std::max(1.0, l_)) throw ArgumentError("QuadraticComponent: matrix is not PSD");
  lambda_ = std::max(lambda_, 0.0);
}

QuadraticComponent QuadraticComponent::centered(Mat A, const Vec& center, const Vec& g) {
  // (1/2)(x-m)^T A (x-m) + g^T (x-m) = x^T A x / 2 + (g - A m)^T x + m^T A m / 2 - g^T m
  Vec c = g - A * center;
  const double offset = 0.5 * center.dot(A * center) - g.dot(center);
  return QuadraticComponent(std::move(A), std::move(c), offset);
}

double QuadraticComponent::value(ConstVecRef x) const {
  return 0.5 * x.dot(A_ * x) + c_.dot(x) + offset_;
}

void QuadraticComponent::gradient(ConstVecRef x, VecRef out) const {
  out.noalias() = A_ * x;
  out += c_;
}

void QuadraticComponent::add_gradient(double alpha, ConstVecRef x, VecRef y) const {
  Vec g = A_ * x;
  g += c_;
  y += alpha * g;
}

LinearComponent::LinearComponent(Vec c, double declared_smoothness)
    : c_(std::move(c)), declared_(declared_smoothness) {
  if (!(declared_ > 0.0)) throw ArgumentError("LinearComponent: declared smoothness must be positive");
}

ScaledComponent::ScaledComponent(ComponentPtr base, double factor) : base_(std::move(base)), factor_(factor) {
  if (!base_) throw ArgumentError("ScaledComponent: null base");
  if (!(factor_ > 0.0)) throw ArgumentError("ScaledComponent: factor must be positive");
}

void ScaledComponent::gradient(ConstVecRef x, VecRef out) const {
  base_->gradient(x, out);
  out *= factor_;
}

SmoothnessConstants smoothness_constants(const Problem& problem) {
  SmoothnessConstants out;
  out.per_component.reserve(problem.size());
  for (const auto& c : problem.components()) out.per_component.push_back(c->smoothness());
  out.l_max = problem.l_max();
  out.l_bar = problem.l_bar();
  return out;
}

}  // namespace proxrr
