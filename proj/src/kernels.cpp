#include "modekit/kernels.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "modekit/errors.hpp"

namespace modekit {

GaussianKernel::GaussianKernel(int dimension) : dimension_(dimension) {
  if (dimension < 1)
    throw InvalidInput("gaussian_kernel: dimension must be at least 1");
  normalizer_ = std::pow(2.0 * std::numbers::pi, -0.5 * dimension);
}

double GaussianKernel::value(std::span<const double> x) const {
  double sq = 0.0;
  for (double v : x)
    sq += v * v;
  return normalizer_ * std::exp(-0.5 * sq);
}

void GaussianKernel::gradient(std::span<const double> x, std::span<double> out) const {
  const double k = value(x);
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = -x[i] * k;
}

void GaussianKernel::hessian(std::span<const double> x, std::span<double> out) const {
  const double k = value(x);
  const std::size_t d = x.size();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out[i * d + j] = (x[i] * x[j] - (i == j ? 1.0 : 0.0)) * k;
}

// K^2 is (4 pi)^{-d/2} times the N(0, I/2) density, whose coordinate
// variances are 1/2.
std::optional<KernelConstants> GaussianKernel::closed_form_constants() const {
  KernelConstants c;
  c.square_integral = std::pow(4.0 * std::numbers::pi, -0.5 * dimension_);
  c.gram_matrix = Matrix::Identity(dimension_, dimension_) * (0.5 * c.square_integral);
  c.moments = Vector::Ones(dimension_);
  return c;
}

FunctionKernel::FunctionKernel(int dimension, int order, ValueFn value, GradientFn gradient,
                               HessianFn hessian)
    : dimension_(dimension), order_(order), value_(std::move(value)),
      gradient_(std::move(gradient)), hessian_(std::move(hessian)) {
  if (dimension < 1)
    throw InvalidInput("FunctionKernel: dimension must be at least 1");
  if (order < 2)
    throw InvalidInput("FunctionKernel: kernel order must be at least 2");
  if (!value_ || !gradient_ || !hessian_)
    throw InvalidInput("FunctionKernel: value, gradient and hessian callables are required");
}

KernelPtr gaussian_kernel(int dimension) { return std::make_shared<GaussianKernel>(dimension); }

double kernel_moment(const Kernel& kernel, int coordinate, int power, const QuadratureConfig& cfg) {
  if (coordinate < 0 || coordinate >= kernel.dimension())
    throw InvalidInput("kernel_moment: coordinate out of range");
  const auto j = static_cast<std::size_t>(coordinate);
  return integrate_cube(
             [&](std::span<const double> y) { return std::pow(y[j], power) * kernel.value(y); },
             kernel.dimension(), cfg)
      .value;
}

KernelConstants compute_constants_by_quadrature(const Kernel& kernel, const QuadratureConfig& cfg) {
  const int d = kernel.dimension();
  const auto du = static_cast<std::size_t>(d);
  KernelConstants c;

  c.square_integral = integrate_cube(
                          [&](std::span<const double> y) {
                            const double k = kernel.value(y);
                            return k * k;
                          },
                          d, cfg)
                          .value;

  std::vector<double> grad(du);
  c.gram_matrix.resize(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const auto iu = static_cast<std::size_t>(i);
      const auto ju = static_cast<std::size_t>(j);
      const double g = integrate_cube(
                           [&](std::span<const double> y) {
                             kernel.gradient(y, grad);
                             return grad[iu] * grad[ju];
                           },
                           d, cfg)
                           .value;
      c.gram_matrix(i, j) = g;
      c.gram_matrix(j, i) = g;
    }
  }

  c.moments.resize(d);
  for (int j = 0; j < d; ++j)
    c.moments(j) = kernel_moment(kernel, j, kernel.order(), cfg);

  if (!(c.square_integral > 0.0))
    throw NumericFailure("compute_constants: \\int K^2 is not positive");
  if (Eigen::LLT<Matrix>(c.gram_matrix).info() != Eigen::Success)
    throw NumericFailure("compute_constants: gram matrix is not positive definite");
  return c;
}

KernelConstants compute_constants(const Kernel& kernel, const QuadratureConfig& cfg) {
  if (auto closed = kernel.closed_form_constants())
    return *closed;
  return compute_constants_by_quadrature(kernel, cfg);
}

} // namespace modekit
