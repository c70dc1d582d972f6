#include "modekit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "modekit/errors.hpp"

namespace modekit {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

QuadratureResult integrate_checked(const std::function<double(double)>& f, double lower,
                                   double upper, double tolerance, unsigned max_depth) {
  double error = 0.0;
  double l1 = 0.0;
  const double value = Rule::integrate(f, lower, upper, max_depth, tolerance, &error, &l1);
  // Boost's stopping rule is relative to the L1 norm; the accepted error is
  // absolute unless the integrand is large.
  const double accepted = tolerance * std::max(1.0, l1);
  if (!std::isfinite(value) || !(error <= accepted)) {
    std::ostringstream msg;
    msg << "quadrature on [" << lower << ", " << upper << "] did not converge: error estimate "
        << error << " exceeds tolerance " << accepted;
    throw NumericFailure(msg.str());
  }
  return {value, error};
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lower, double upper,
                           const QuadratureConfig& cfg) {
  if (!(lower < upper))
    throw InvalidInput("integrate: empty interval");
  return integrate_checked(f, lower, upper, cfg.abs_tolerance, cfg.max_depth);
}

QuadratureResult integrate_cube(const std::function<double(std::span<const double>)>& f,
                                int dimension, const QuadratureConfig& cfg) {
  if (dimension < 1)
    throw InvalidInput("integrate_cube: dimension must be positive");
  if (!(cfg.radius > 0.0))
    throw InvalidInput("integrate_cube: radius must be positive");

  std::vector<double> point(static_cast<std::size_t>(dimension), 0.0);
  const double r = cfg.radius;
  // Inner integrals run tighter so their errors do not swamp the outer estimate.
  const double inner_tol = cfg.abs_tolerance / (2.0 * r * 10.0);

  double total_error = 0.0;
  std::function<double(int)> nested = [&](int axis) -> double {
    const double tol = axis == 0 ? cfg.abs_tolerance : inner_tol;
    auto slice = [&](double t) {
      point[static_cast<std::size_t>(axis)] = t;
      if (axis + 1 == dimension)
        return f(point);
      return nested(axis + 1);
    };
    const auto res = integrate_checked(slice, -r, r, tol, cfg.max_depth);
    if (axis == 0)
      total_error = res.error_estimate;
    return res.value;
  };
  const double value = nested(0);
  return {value, total_error};
}

} // namespace modekit
