#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>

#include "modekit/linalg.hpp"
#include "modekit/quadrature.hpp"

namespace modekit {

// Integral constants of a kernel that enter the asymptotic covariance and bias.
struct KernelConstants {
  double square_integral = 0.0; // \int K^2
  Matrix gram_matrix;           // G(i,j) = \int dK/dx_i * dK/dx_j
  Vector moments;               // beta_j = \int y_j^q K(y) dy
};

// A smooth, even kernel on R^d with its first two derivatives.
//
// Derivative outputs are written into caller-owned storage so the density
// estimators can evaluate millions of terms without allocating. The Hessian
// is stored row-major in a span of length d*d.
class Kernel {
public:
  virtual ~Kernel() = default;

  virtual int dimension() const = 0;
  virtual int order() const = 0;

  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;
  virtual void hessian(std::span<const double> x, std::span<double> out) const = 0;

  // Points with ||x|| beyond this radius contribute nothing representable.
  virtual double cutoff_radius() const { return std::numeric_limits<double>::infinity(); }

  // Constants known analytically; kernels without closed forms return nullopt
  // and are handled by quadrature.
  virtual std::optional<KernelConstants> closed_form_constants() const { return std::nullopt; }
};

using KernelPtr = std::shared_ptr<const Kernel>;

// Product standard normal kernel, order 2.
class GaussianKernel final : public Kernel {
public:
  explicit GaussianKernel(int dimension);

  int dimension() const override { return dimension_; }
  int order() const override { return 2; }
  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> out) const override;
  void hessian(std::span<const double> x, std::span<double> out) const override;
  double cutoff_radius() const override { return 40.0; }
  std::optional<KernelConstants> closed_form_constants() const override;

private:
  int dimension_;
  double normalizer_;
};

// User-registered kernel assembled from callables. Constants always come
// from quadrature.
class FunctionKernel final : public Kernel {
public:
  using ValueFn = std::function<double(std::span<const double>)>;
  using GradientFn = std::function<void(std::span<const double>, std::span<double>)>;
  using HessianFn = std::function<void(std::span<const double>, std::span<double>)>;

  FunctionKernel(int dimension, int order, ValueFn value, GradientFn gradient, HessianFn hessian);

  int dimension() const override { return dimension_; }
  int order() const override { return order_; }
  double value(std::span<const double> x) const override { return value_(x); }
  void gradient(std::span<const double> x, std::span<double> out) const override { gradient_(x, out); }
  void hessian(std::span<const double> x, std::span<double> out) const override { hessian_(x, out); }

private:
  int dimension_;
  int order_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
};

KernelPtr gaussian_kernel(int dimension);

// Closed forms when the kernel provides them, quadrature otherwise.
KernelConstants compute_constants(const Kernel& kernel, const QuadratureConfig& cfg = {});

// Always integrates numerically; doubles as the oracle for closed forms.
KernelConstants compute_constants_by_quadrature(const Kernel& kernel, const QuadratureConfig& cfg = {});

// \int y_j^power K(y) dy for coordinate j (0-based).
double kernel_moment(const Kernel& kernel, int coordinate, int power, const QuadratureConfig& cfg = {});

} // namespace modekit
