#pragma once

#include <Eigen/Core>

namespace proxrr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using ConstVecRef = Eigen::Ref<const Vec>;
using VecRef = Eigen::Ref<Vec>;

}  // namespace proxrr
