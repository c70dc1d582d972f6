#pragma once

#include <optional>
#include <span>
#include <vector>

#include "modekit/density.hpp"

namespace modekit {

struct SearchBox {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct SearchConfig {
  // Defaults to [min X - 3 h_n, max X + 3 h_n] componentwise.
  std::optional<SearchBox> box;
  // Defaults to 512 for d = 1 and 64 for d >= 2.
  std::optional<int> grid_points_per_dim;
  int newton_max_steps = 50;
  double gradient_tolerance = 1e-12;
};

struct ModeDiagnostics {
  std::vector<double> grid_winner;
  double grid_value = 0.0;
  int refinement_steps = 0;
  double gradient_norm = 0.0;
  bool converged = false; // gradient norm reached the tolerance
};

struct ModeEstimate {
  std::vector<double> location;
  double size = 0.0; // value of the searched estimate at location
  ModeDiagnostics diagnostics;
};

// Tie tolerance on density values for the lexicographic rule.
inline constexpr double kModeTieTolerance = 1e-15;

// Maximizes the density estimate: a tensor-grid scan over the box (ties go to
// the lexicographically smallest point), then Newton ascent from the grid
// winner. Steps that would lower the estimate are backtracked; when the
// Hessian is not negative definite the step falls back to gradient ascent.
ModeEstimate locate_mode(const DensityEstimator& state, const SearchConfig& cfg = {});

// Argmax of the estimate over the observed sample points.
std::vector<double> sample_argmax_mode(const DensityEstimator& state);

// Size of the mode: the (possibly differently smoothed) estimate at theta.
double estimate_size(std::span<const double> theta, const DensityEstimator& size_state);

// True if x precedes y in lexicographic order.
bool lexicographically_less(std::span<const double> x, std::span<const double> y);

} // namespace modekit
