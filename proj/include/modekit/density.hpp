#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "modekit/bandwidth.hpp"
#include "modekit/kernels.hpp"
#include "modekit/linalg.hpp"

namespace modekit {

enum class Flavor {
  Semirecursive, // Wolverton-Wagner: observation i keeps its arrival bandwidth h_i
  Nonrecursive,  // Rosenblatt: every observation uses the current h_n
};

const char* to_string(Flavor flavor);

// Kernel density estimate of f together with its gradient and Hessian.
//
// The sample history is kept so the estimate can be queried anywhere. Grids
// registered with track_grid() are maintained incrementally: for the
// semirecursive flavor each observe() costs O(grid size) via
//   f_n = (1 - 1/n) f_{n-1} + K((. - X_n)/h_n) / (n h_n^d).
// Nonrecursive grids are recomputed since h_n changes for every sample.
class DensityEstimator {
public:
  DensityEstimator(Flavor flavor, KernelPtr kernel, BandwidthSchedule schedule);

  void observe(std::span<const double> x);
  void observe(double x) { observe(std::span<const double>(&x, 1)); }

  Flavor flavor() const { return flavor_; }
  int dimension() const { return dimension_; }
  std::size_t count() const { return count_; }
  bool empty() const { return count_ == 0; }
  const Kernel& kernel() const { return *kernel_; }
  const KernelPtr& kernel_ptr() const { return kernel_; }
  const BandwidthSchedule& schedule() const { return schedule_; }

  // h_n for the current count.
  double current_bandwidth() const;
  // Bandwidths captured at arrival (semirecursive only; empty otherwise).
  const std::vector<double>& arrival_bandwidths() const { return arrival_bandwidths_; }
  // Row-major samples, count() x dimension().
  const std::vector<double>& samples() const { return samples_; }
  std::span<const double> sample(std::size_t i) const;

  double evaluate(std::span<const double> x) const;
  double evaluate(double x) const { return evaluate(std::span<const double>(&x, 1)); }
  Vector gradient(std::span<const double> x) const;
  Matrix hessian(std::span<const double> x) const;

  // Registers row-major points (m x d) whose values are kept current. Returns
  // a handle for tracked_values().
  std::size_t track_grid(std::vector<double> points);
  std::span<const double> tracked_values(std::size_t handle) const;
  std::span<const double> tracked_points(std::size_t handle) const;

private:
  struct TrackedGrid {
    std::vector<double> points;
    std::vector<double> values;
  };

  void require_samples(const char* what) const;
  void require_point(std::span<const double> x, const char* what) const;
  void refresh(TrackedGrid& grid) const;

  Flavor flavor_;
  KernelPtr kernel_;
  BandwidthSchedule schedule_;
  int dimension_;
  double cutoff_sq_;
  std::size_t count_ = 0;
  std::vector<double> samples_;
  std::vector<double> arrival_bandwidths_;
  std::vector<TrackedGrid> grids_;
};

} // namespace modekit
