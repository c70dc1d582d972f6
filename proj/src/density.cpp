#include "modekit/density.hpp"

#include <cmath>
#include <string>

#include "modekit/errors.hpp"

namespace modekit {

const char* to_string(Flavor flavor) {
  return flavor == Flavor::Semirecursive ? "semirecursive" : "nonrecursive";
}

DensityEstimator::DensityEstimator(Flavor flavor, KernelPtr kernel, BandwidthSchedule schedule)
    : flavor_(flavor), kernel_(std::move(kernel)), schedule_(schedule) {
  if (!kernel_)
    throw InvalidInput("DensityEstimator: kernel is null");
  dimension_ = kernel_->dimension();
  const double r = kernel_->cutoff_radius();
  cutoff_sq_ = r * r;
}

void DensityEstimator::require_samples(const char* what) const {
  if (count_ == 0)
    throw InvalidInput(std::string(what) + ": density estimator has no observations");
}

void DensityEstimator::require_point(std::span<const double> x, const char* what) const {
  if (x.size() != static_cast<std::size_t>(dimension_))
    throw InvalidInput(std::string(what) + ": point has dimension " + std::to_string(x.size()) +
                       ", estimator has dimension " + std::to_string(dimension_));
}

double DensityEstimator::current_bandwidth() const {
  require_samples("current_bandwidth");
  return schedule_(count_);
}

std::span<const double> DensityEstimator::sample(std::size_t i) const {
  const auto d = static_cast<std::size_t>(dimension_);
  return std::span<const double>(samples_).subspan(i * d, d);
}

void DensityEstimator::observe(std::span<const double> x) {
  require_point(x, "observe");
  for (double v : x)
    if (!std::isfinite(v))
      throw InvalidInput("observe: non-finite coordinate");
  samples_.insert(samples_.end(), x.begin(), x.end());
  ++count_;
  const double h = schedule_(count_);
  if (flavor_ == Flavor::Semirecursive)
    arrival_bandwidths_.push_back(h);

  if (grids_.empty())
    return;
  if (flavor_ == Flavor::Nonrecursive) {
    for (auto& g : grids_)
      refresh(g);
    return;
  }

  const auto d = static_cast<std::size_t>(dimension_);
  const double n = static_cast<double>(count_);
  const double keep = 1.0 - 1.0 / n;
  const double scale = 1.0 / (n * std::pow(h, dimension_));
  std::vector<double> u(d);
  for (auto& g : grids_) {
    const std::size_t m = g.values.size();
    for (std::size_t k = 0; k < m; ++k) {
      double sq = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        u[j] = (g.points[k * d + j] - x[j]) / h;
        sq += u[j] * u[j];
      }
      const double term = sq > cutoff_sq_ ? 0.0 : scale * kernel_->value(u);
      g.values[k] = keep * g.values[k] + term;
    }
  }
}

double DensityEstimator::evaluate(std::span<const double> x) const {
  require_samples("evaluate");
  require_point(x, "evaluate");
  const auto d = static_cast<std::size_t>(dimension_);
  const double* xs = samples_.data();

  if (d == 1) {
    const double x0 = x[0];
    double u = 0.0;
    const std::span<const double> us(&u, 1);
    double sum = 0.0;
    if (flavor_ == Flavor::Semirecursive) {
      for (std::size_t i = 0; i < count_; ++i) {
        const double inv_h = 1.0 / arrival_bandwidths_[i];
        u = (x0 - xs[i]) * inv_h;
        if (u * u > cutoff_sq_)
          continue;
        sum += inv_h * kernel_->value(us);
      }
      return sum / static_cast<double>(count_);
    }
    const double inv_h = 1.0 / schedule_(count_);
    for (std::size_t i = 0; i < count_; ++i) {
      u = (x0 - xs[i]) * inv_h;
      if (u * u > cutoff_sq_)
        continue;
      sum += kernel_->value(us);
    }
    return sum * inv_h / static_cast<double>(count_);
  }

  std::vector<double> u(d);
  const double common_h = flavor_ == Flavor::Nonrecursive ? schedule_(count_) : 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < count_; ++i) {
    const double h = flavor_ == Flavor::Semirecursive ? arrival_bandwidths_[i] : common_h;
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      u[j] = (x[j] - xs[i * d + j]) / h;
      sq += u[j] * u[j];
    }
    if (sq > cutoff_sq_)
      continue;
    sum += kernel_->value(u) / std::pow(h, dimension_);
  }
  return sum / static_cast<double>(count_);
}

Vector DensityEstimator::gradient(std::span<const double> x) const {
  require_samples("gradient");
  require_point(x, "gradient");
  const auto d = static_cast<std::size_t>(dimension_);
  std::vector<double> u(d), g(d);
  Vector out = Vector::Zero(dimension_);
  const double common_h = flavor_ == Flavor::Nonrecursive ? schedule_(count_) : 0.0;
  for (std::size_t i = 0; i < count_; ++i) {
    const double h = flavor_ == Flavor::Semirecursive ? arrival_bandwidths_[i] : common_h;
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      u[j] = (x[j] - samples_[i * d + j]) / h;
      sq += u[j] * u[j];
    }
    if (sq > cutoff_sq_)
      continue;
    kernel_->gradient(u, g);
    const double w = std::pow(h, -(dimension_ + 1));
    for (std::size_t j = 0; j < d; ++j)
      out(static_cast<Eigen::Index>(j)) += w * g[j];
  }
  return out / static_cast<double>(count_);
}

Matrix DensityEstimator::hessian(std::span<const double> x) const {
  require_samples("hessian");
  require_point(x, "hessian");
  const auto d = static_cast<std::size_t>(dimension_);
  std::vector<double> u(d), hk(d * d);
  Matrix out = Matrix::Zero(dimension_, dimension_);
  const double common_h = flavor_ == Flavor::Nonrecursive ? schedule_(count_) : 0.0;
  for (std::size_t i = 0; i < count_; ++i) {
    const double h = flavor_ == Flavor::Semirecursive ? arrival_bandwidths_[i] : common_h;
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      u[j] = (x[j] - samples_[i * d + j]) / h;
      sq += u[j] * u[j];
    }
    if (sq > cutoff_sq_)
      continue;
    kernel_->hessian(u, hk);
    const double w = std::pow(h, -(dimension_ + 2));
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += w * hk[r * d + c];
  }
  out /= static_cast<double>(count_);
  // Mixed partials of K are symmetric; enforce it against rounding.
  return 0.5 * (out + out.transpose());
}

void DensityEstimator::refresh(TrackedGrid& grid) const {
  const auto d = static_cast<std::size_t>(dimension_);
  const std::size_t m = grid.values.size();
  for (std::size_t k = 0; k < m; ++k)
    grid.values[k] =
        count_ == 0 ? 0.0 : evaluate(std::span<const double>(grid.points).subspan(k * d, d));
}

std::size_t DensityEstimator::track_grid(std::vector<double> points) {
  const auto d = static_cast<std::size_t>(dimension_);
  if (points.size() % d != 0)
    throw InvalidInput("track_grid: point buffer length is not a multiple of the dimension");
  TrackedGrid g;
  g.values.assign(points.size() / d, 0.0);
  g.points = std::move(points);
  refresh(g);
  grids_.push_back(std::move(g));
  return grids_.size() - 1;
}

std::span<const double> DensityEstimator::tracked_values(std::size_t handle) const {
  if (handle >= grids_.size())
    throw InvalidInput("tracked_values: unknown grid handle");
  return grids_[handle].values;
}

std::span<const double> DensityEstimator::tracked_points(std::size_t handle) const {
  if (handle >= grids_.size())
    throw InvalidInput("tracked_points: unknown grid handle");
  return grids_[handle].points;
}

} // namespace modekit
