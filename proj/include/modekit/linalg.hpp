#pragma once

#include <Eigen/Dense>

namespace modekit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

} // namespace modekit
