#pragma once

#include <optional>
#include <span>
#include <utility>

#include "modekit/bandwidth.hpp"
#include "modekit/density.hpp"
#include "modekit/kernels.hpp"
#include "modekit/linalg.hpp"

namespace modekit {

// q-th order pure partial derivatives of f at the mode, needed for the bias.
struct QthDerivativeData {
  Vector pure_derivatives;  // (d^q f / dx_j^q)(theta), j = 1..d
  Matrix gradients;         // column j: gradient of (d^q f / dx_j^q) at theta
};

// Ingredients of the joint limit law of (theta_n, mu_n).
struct AsymptoticModel {
  double a = 0.0;
  double a_tilde = 0.0;
  int d = 1;
  int q = 2;
  double density_at_mode = 0.0; // f(theta)
  Matrix hessian_at_mode;       // D^2 f(theta)
  std::optional<QthDerivativeData> qth_derivatives;
  KernelConstants constants;
};

// A = diag(-[D^2 f(theta)]^{-1}, 1).
Matrix a_matrix(const AsymptoticModel& m);

// Sigma (semirecursive) or Sigma* (nonrecursive), (d+1) x (d+1) block diagonal.
Matrix sigma_matrix(const AsymptoticModel& m, Flavor flavor);

// A Sigma A: covariance of (sqrt(n h^{d+2})(theta_n - theta), sqrt(n htilde^d)(mu_n - mu)).
Matrix asymptotic_covariance(const AsymptoticModel& m, Flavor flavor);

// B_q(theta) for the semirecursive estimators, B*_q(theta) for the nonrecursive ones.
Vector bias_vector(const AsymptoticModel& m, Flavor flavor);

// D(c, ctilde) A B_q(theta): the mean of the limit law in the balanced regime.
Vector balanced_centering(const AsymptoticModel& m, double c, double c_tilde, Flavor flavor);

// Upper alpha quantile of chi^2 with 2 degrees of freedom, -2 log(alpha).
double chi2_quantile_df2(double alpha);
double chi2_cdf_df2(double x);

// {(theta, mu) : P (theta_hat - theta)^2 + Q (mu_hat - mu)^2 <= c_alpha}, d = 1.
struct EllipsoidCoefficients {
  double p_coeff = 0.0;
  double q_coeff = 0.0;
  double c_alpha = 0.0;
  Flavor flavor = Flavor::Semirecursive;

  // Semi-axis lengths sqrt(c/P) along theta and sqrt(c/Q) along mu.
  double theta_semi_axis() const;
  double mu_semi_axis() const;
  double statistic(std::pair<double, double> center, std::pair<double, double> candidate) const;
};

struct EllipsoidInputs {
  std::uint64_t n = 0;
  double h = 0.0;           // location bandwidth h_n
  double h_tilde = 0.0;     // size bandwidth htilde_n
  double f_at_theta = 0.0;  // size estimate (or true f(theta))
  double f2_at_theta = 0.0; // second derivative estimate (or true f''(theta))
  double a = 0.0;
  double a_tilde = 0.0;
  double alpha = 0.05;
  // Overrides chi2_quantile_df2(alpha) when set.
  std::optional<double> critical_value;
  Flavor flavor = Flavor::Semirecursive;
};

// P_n and Q_n (or P*_n, Q*_n) for the chi^2(2) confidence ellipsoid.
EllipsoidCoefficients ellipsoid_coefficients(const EllipsoidInputs& in,
                                             const KernelConstants& constants);

bool ellipsoid_contains(const EllipsoidCoefficients& coeffs, std::pair<double, double> center,
                        std::pair<double, double> candidate);

// Estimate of f'' at `at` from a one-dimensional sample stream using the
// curvature bandwidth schedule.
double estimate_second_derivative(std::span<const double> sample_stream, KernelPtr kernel,
                                  const BandwidthSchedule& curvature_schedule, double at,
                                  Flavor flavor);

} // namespace modekit
