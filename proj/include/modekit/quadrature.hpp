#pragma once

#include <functional>
#include <span>

namespace modekit {

struct QuadratureConfig {
  double radius = 10.0;        // integrate over [-radius, radius]^d
  double abs_tolerance = 1e-10;
  unsigned max_depth = 25;     // bisection depth of the adaptive rule
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Adaptive Gauss-Kronrod (G7/K15) quadrature on [lower, upper].
// Throws NumericFailure when the error estimate stays above the tolerance.
QuadratureResult integrate(const std::function<double(double)>& f, double lower, double upper,
                           const QuadratureConfig& cfg = {});

// Tensor-product adaptive quadrature of f over the cube [-R, R]^dimension,
// built by nesting the one-dimensional rule.
QuadratureResult integrate_cube(const std::function<double(std::span<const double>)>& f,
                                int dimension, const QuadratureConfig& cfg = {});

} // namespace modekit
