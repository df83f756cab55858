#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace distopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// atan(e^z), evaluated on the side of the identity that cannot overflow:
/// atan(e^z) = pi/2 - atan(e^-z) for z > 0. Range is [pi/4, pi/2) for z >= 0.
inline double atan_exp(double z) {
  if (z > 0.0) return std::numbers::pi / 2.0 - std::atan(std::exp(-z));
  return std::atan(std::exp(z));
}

}  // namespace distopt
