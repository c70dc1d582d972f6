#include "modekit/inference.hpp"

#include <cmath>

#include "modekit/errors.hpp"

namespace modekit {

namespace {

void check_model(const AsymptoticModel& m) {
  if (m.d < 1 || m.q < 2)
    throw InvalidInput("asymptotic model: need d >= 1 and q >= 2");
  if (!(m.density_at_mode > 0.0))
    throw InvalidInput("asymptotic model: density at the mode must be positive");
  if (m.hessian_at_mode.rows() != m.d || m.hessian_at_mode.cols() != m.d)
    throw InvalidInput("asymptotic model: Hessian must be d x d");
  if (m.constants.gram_matrix.rows() != m.d || m.constants.gram_matrix.cols() != m.d)
    throw InvalidInput("asymptotic model: kernel constants have the wrong dimension");
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i)
    r *= i;
  return r;
}

} // namespace

Matrix a_matrix(const AsymptoticModel& m) {
  check_model(m);
  Eigen::FullPivLU<Matrix> lu(m.hessian_at_mode);
  if (!lu.isInvertible())
    throw NumericFailure("asymptotic model: Hessian at the mode is singular");
  Matrix a = Matrix::Zero(m.d + 1, m.d + 1);
  a.topLeftCorner(m.d, m.d) = -lu.inverse();
  a(m.d, m.d) = 1.0;
  return a;
}

Matrix sigma_matrix(const AsymptoticModel& m, Flavor flavor) {
  check_model(m);
  const double loc_factor = flavor == Flavor::Semirecursive ? 1.0 + m.a * (m.d + 2) : 1.0;
  const double size_factor = flavor == Flavor::Semirecursive ? 1.0 + m.a_tilde * m.d : 1.0;
  Matrix s = Matrix::Zero(m.d + 1, m.d + 1);
  s.topLeftCorner(m.d, m.d) = m.density_at_mode * m.constants.gram_matrix / loc_factor;
  s(m.d, m.d) = m.density_at_mode * m.constants.square_integral / size_factor;
  return s;
}

Matrix asymptotic_covariance(const AsymptoticModel& m, Flavor flavor) {
  const Matrix a = a_matrix(m);
  return a * sigma_matrix(m, flavor) * a;
}

Vector bias_vector(const AsymptoticModel& m, Flavor flavor) {
  check_model(m);
  if (!m.qth_derivatives)
    throw InvalidInput("bias_vector: q-th derivative data is required");
  const auto& qd = *m.qth_derivatives;
  if (qd.pure_derivatives.size() != m.d || qd.gradients.rows() != m.d || qd.gradients.cols() != m.d)
    throw InvalidInput("bias_vector: q-th derivative data has the wrong dimension");
  if (m.constants.moments.size() != m.d)
    throw InvalidInput("bias_vector: kernel moments have the wrong dimension");

  double loc_factor = 1.0;
  double size_factor = 1.0;
  if (flavor == Flavor::Semirecursive) {
    if (m.a * m.q == 1.0 || m.a_tilde * m.q == 1.0)
      throw InvalidInput("bias_vector: a q = 1 or atilde q = 1 is excluded");
    loc_factor = 1.0 / (1.0 - m.a * m.q);
    size_factor = 1.0 / (1.0 - m.a_tilde * m.q);
  }
  const double sign = (m.q % 2 == 0) ? 1.0 : -1.0;
  const double common = sign / factorial(m.q);

  Vector b(m.d + 1);
  b.head(m.d) = common * loc_factor * (qd.gradients * m.constants.moments);
  b(m.d) = common * size_factor * m.constants.moments.dot(qd.pure_derivatives);
  return b;
}

Vector balanced_centering(const AsymptoticModel& m, double c, double c_tilde, Flavor flavor) {
  if (!(c >= 0.0) || !(c_tilde >= 0.0))
    throw InvalidInput("balanced_centering: c and ctilde must be non-negative");
  Vector dab = a_matrix(m) * bias_vector(m, flavor);
  dab.head(m.d) *= std::sqrt(c);
  dab(m.d) *= std::sqrt(c_tilde);
  return dab;
}

double chi2_quantile_df2(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidInput("chi2_quantile_df2: alpha must lie in (0, 1)");
  return -2.0 * std::log(alpha);
}

double chi2_cdf_df2(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-0.5 * x); }

double EllipsoidCoefficients::theta_semi_axis() const { return std::sqrt(c_alpha / p_coeff); }
double EllipsoidCoefficients::mu_semi_axis() const { return std::sqrt(c_alpha / q_coeff); }

double EllipsoidCoefficients::statistic(std::pair<double, double> center,
                                        std::pair<double, double> candidate) const {
  const double dt = center.first - candidate.first;
  const double dm = center.second - candidate.second;
  return p_coeff * dt * dt + q_coeff * dm * dm;
}

EllipsoidCoefficients ellipsoid_coefficients(const EllipsoidInputs& in,
                                             const KernelConstants& constants) {
  if (constants.gram_matrix.rows() != 1 || constants.gram_matrix.cols() != 1)
    throw Unsupported("ellipsoid_coefficients: confidence ellipsoids are only defined for d = 1");
  if (in.n < 1)
    throw InvalidInput("ellipsoid_coefficients: n must be positive");
  if (!(in.h > 0.0) || !(in.h_tilde > 0.0))
    throw InvalidInput("ellipsoid_coefficients: bandwidths must be positive");
  if (!(in.f_at_theta > 0.0))
    throw InvalidInput("ellipsoid_coefficients: density at the mode must be positive");
  if (in.f2_at_theta == 0.0 || !std::isfinite(in.f2_at_theta))
    throw NumericFailure("ellipsoid_coefficients: second derivative at the mode is zero");

  const double n = static_cast<double>(in.n);
  const double gram = constants.gram_matrix(0, 0);
  const bool semi = in.flavor == Flavor::Semirecursive;
  EllipsoidCoefficients e;
  e.flavor = in.flavor;
  if (in.critical_value) {
    if (!(*in.critical_value > 0.0))
      throw InvalidInput("ellipsoid_coefficients: critical value must be positive");
    e.c_alpha = *in.critical_value;
  } else {
    e.c_alpha = chi2_quantile_df2(in.alpha);
  }
  e.p_coeff = (semi ? 1.0 + 3.0 * in.a : 1.0) * n * in.h * in.h * in.h * in.f2_at_theta *
              in.f2_at_theta / (in.f_at_theta * gram);
  e.q_coeff = (semi ? 1.0 + in.a_tilde : 1.0) * n * in.h_tilde /
              (in.f_at_theta * constants.square_integral);
  return e;
}

bool ellipsoid_contains(const EllipsoidCoefficients& coeffs, std::pair<double, double> center,
                        std::pair<double, double> candidate) {
  return coeffs.statistic(center, candidate) <= coeffs.c_alpha;
}

double estimate_second_derivative(std::span<const double> sample_stream, KernelPtr kernel,
                                  const BandwidthSchedule& curvature_schedule, double at,
                                  Flavor flavor) {
  if (!kernel || kernel->dimension() != 1)
    throw Unsupported("estimate_second_derivative: requires a one-dimensional kernel");
  if (sample_stream.empty())
    throw InvalidInput("estimate_second_derivative: empty sample stream");
  DensityEstimator state(flavor, std::move(kernel), curvature_schedule);
  for (double x : sample_stream)
    state.observe(x);
  return state.hessian(std::span<const double>(&at, 1))(0, 0);
}

} // namespace modekit
