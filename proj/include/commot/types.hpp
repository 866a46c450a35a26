#pragma once

#include <Eigen/Dense>

namespace commot {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace commot
