#include "modekit/mode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modekit/errors.hpp"

namespace modekit {

namespace {

SearchBox default_box(const DensityEstimator& state) {
  const auto d = static_cast<std::size_t>(state.dimension());
  const double margin = 3.0 * state.current_bandwidth();
  SearchBox box;
  box.lower.assign(d, std::numeric_limits<double>::infinity());
  box.upper.assign(d, -std::numeric_limits<double>::infinity());
  const auto& xs = state.samples();
  for (std::size_t i = 0; i < state.count(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      box.lower[j] = std::min(box.lower[j], xs[i * d + j]);
      box.upper[j] = std::max(box.upper[j], xs[i * d + j]);
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    box.lower[j] -= margin;
    box.upper[j] += margin;
  }
  return box;
}

bool negative_definite(const Matrix& h) {
  Eigen::LLT<Matrix> llt(-h);
  return llt.info() == Eigen::Success;
}

} // namespace

bool lexicographically_less(std::span<const double> x, std::span<const double> y) {
  for (std::size_t j = 0; j < x.size() && j < y.size(); ++j) {
    if (x[j] != y[j])
      return x[j] < y[j];
  }
  return false;
}

ModeEstimate locate_mode(const DensityEstimator& state, const SearchConfig& cfg) {
  if (state.empty())
    throw InvalidInput("locate_mode: density estimator has no observations");
  const int dim = state.dimension();
  const auto d = static_cast<std::size_t>(dim);

  const SearchBox box = cfg.box ? *cfg.box : default_box(state);
  if (box.lower.size() != d || box.upper.size() != d)
    throw InvalidInput("locate_mode: search box dimension mismatch");
  for (std::size_t j = 0; j < d; ++j)
    if (!(box.lower[j] <= box.upper[j]) || !std::isfinite(box.lower[j]) ||
        !std::isfinite(box.upper[j]))
      throw InvalidInput("locate_mode: degenerate search box");

  const int per_dim = cfg.grid_points_per_dim.value_or(dim == 1 ? 512 : 64);
  if (per_dim < 2)
    throw InvalidInput("locate_mode: need at least 2 grid points per dimension");
  if (cfg.newton_max_steps < 0)
    throw InvalidInput("locate_mode: negative Newton step budget");

  // Odometer over the tensor grid with the first coordinate varying slowest,
  // so points are visited in increasing lexicographic order and a strict
  // improvement test keeps the smallest point among ties.
  std::vector<int> index(d, 0);
  std::vector<double> point(d), best(d);
  double best_value = -std::numeric_limits<double>::infinity();
  auto coord = [&](std::size_t j, int k) {
    const double t = static_cast<double>(k) / static_cast<double>(per_dim - 1);
    return k == per_dim - 1 ? box.upper[j] : box.lower[j] + t * (box.upper[j] - box.lower[j]);
  };
  bool done = false;
  while (!done) {
    for (std::size_t j = 0; j < d; ++j)
      point[j] = coord(j, index[j]);
    const double v = state.evaluate(point);
    if (v > best_value + kModeTieTolerance) {
      best_value = v;
      best = point;
    }
    std::size_t j = d;
    for (;;) {
      if (j == 0) {
        done = true;
        break;
      }
      --j;
      if (++index[j] < per_dim)
        break;
      index[j] = 0;
    }
  }

  ModeEstimate est;
  est.diagnostics.grid_winner = best;
  est.diagnostics.grid_value = best_value;

  std::vector<double> current = best;
  double fx = best_value;
  Vector g = state.gradient(current);
  int steps = 0;
  std::vector<double> trial(d);
  while (steps < cfg.newton_max_steps && g.norm() > cfg.gradient_tolerance) {
    const Matrix h = state.hessian(current);
    Vector step;
    if (negative_definite(h))
      step = -h.ldlt().solve(g);
    else
      step = g / std::max(h.norm(), 1e-300);

    // Near the top the ascent predicted by the quadratic model drops below the
    // rounding noise of f, so value comparisons stop being informative. There
    // a step is judged by the gradient instead, with f allowed to move only
    // within its rounding noise.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(fx);
    const bool flat = 0.5 * std::abs(g.dot(step)) <= noise;

    bool accepted = false;
    double t = 1.0;
    for (int halving = 0; halving < 60 && !accepted; ++halving, t *= 0.5) {
      for (std::size_t j = 0; j < d; ++j)
        trial[j] = current[j] + t * step(static_cast<Eigen::Index>(j));
      const double ft = state.evaluate(trial);
      // Away from the top a tie in value is accepted only if stationarity
      // improves, so the estimate never decreases.
      if (flat)
        accepted = ft >= fx - noise && state.gradient(trial).norm() < g.norm();
      else
        accepted = ft > fx || (ft == fx && state.gradient(trial).norm() < g.norm());
      if (accepted)
        fx = ft;
    }
    if (!accepted)
      break;
    current = trial;
    g = state.gradient(current);
    ++steps;
  }

  est.location = current;
  est.size = fx;
  est.diagnostics.refinement_steps = steps;
  est.diagnostics.gradient_norm = g.norm();
  est.diagnostics.converged = g.norm() <= cfg.gradient_tolerance;
  return est;
}

std::vector<double> sample_argmax_mode(const DensityEstimator& state) {
  if (state.empty())
    throw InvalidInput("sample_argmax_mode: density estimator has no observations");
  std::size_t best = 0;
  double best_value = state.evaluate(state.sample(0));
  for (std::size_t i = 1; i < state.count(); ++i) {
    const auto xi = state.sample(i);
    const double v = state.evaluate(xi);
    if (v > best_value + kModeTieTolerance ||
        (std::abs(v - best_value) <= kModeTieTolerance &&
         lexicographically_less(xi, state.sample(best)))) {
      if (v > best_value)
        best_value = v;
      best = i;
    }
  }
  const auto w = state.sample(best);
  return {w.begin(), w.end()};
}

double estimate_size(std::span<const double> theta, const DensityEstimator& size_state) {
  if (theta.size() != static_cast<std::size_t>(size_state.dimension()))
    throw InvalidInput("estimate_size: theta dimension does not match the size estimator");
  if (size_state.empty())
    throw InvalidInput("estimate_size: size estimator has no observations");
  return size_state.evaluate(theta);
}

} // namespace modekit
