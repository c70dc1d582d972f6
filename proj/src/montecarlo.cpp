#include "modekit/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "modekit/errors.hpp"
#include "modekit/inference.hpp"

namespace modekit {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

const KernelPtr& shared_gaussian() {
  static const KernelPtr k = gaussian_kernel(1);
  return k;
}

const KernelConstants& gaussian_constants() {
  static const KernelConstants c = compute_constants(*shared_gaussian());
  return c;
}

struct FlavorResult {
  double theta, mu, f2;
  EllipsoidCoefficients ellipsoid;
};

FlavorResult estimate_flavor(Flavor flavor, std::span<const double> xs, const Schedules& s,
                             double critical_value, const GaussianTruth& truth, NuisanceSource nuisance,
                             const SearchConfig& search) {
  const auto& k = shared_gaussian();
  DensityEstimator loc(flavor, k, s.location);
  DensityEstimator size(flavor, k, s.size);
  for (double x : xs) {
    loc.observe(x);
    size.observe(x);
  }
  const ModeEstimate mode = locate_mode(loc, search);
  const double theta = mode.location[0];
  const double mu = estimate_size(mode.location, size);

  const std::uint64_t n = xs.size();
  EllipsoidInputs in;
  in.n = n;
  in.h = s.location(n);
  in.h_tilde = s.size(n);
  in.a = s.location.exponent();
  in.a_tilde = s.size.exponent();
  in.critical_value = critical_value;
  in.flavor = flavor;
  if (nuisance == NuisanceSource::Estimated) {
    in.f_at_theta = mu;
    in.f2_at_theta = estimate_second_derivative(xs, k, s.curvature, theta, flavor);
  } else {
    in.f_at_theta = truth.mu;
    in.f2_at_theta = truth.f2;
  }
  return {theta, mu, in.f2_at_theta, ellipsoid_coefficients(in, gaussian_constants())};
}

std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

} // namespace

std::string format_number(double x) { return fmt6(x); }

void validate(const SimulationConfig& cfg) {
  if (cfg.n < 2)
    throw InvalidInput("simulation: n must be at least 2");
  if (cfg.replications < 1)
    throw InvalidInput("simulation: replications must be at least 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw InvalidInput("simulation: alpha must lie in (0, 1)");
  if (cfg.sigmas.empty())
    throw InvalidInput("simulation: at least one sigma is required");
  for (double s : cfg.sigmas)
    if (!(s > 0.0) || !std::isfinite(s))
      throw InvalidInput("simulation: every sigma must be positive");
}

double SimulationConfig::critical_value() const {
  const double exact = chi2_quantile_df2(alpha);
  if (!critical_value_decimals)
    return exact;
  if (*critical_value_decimals < 0)
    throw InvalidInput("simulation: critical value decimals must be non-negative");
  const double scale = std::pow(10.0, *critical_value_decimals);
  const double rounded = std::round(exact * scale) / scale;
  if (!(rounded > 0.0))
    throw InvalidInput("simulation: rounded critical value is zero; use more decimals");
  return rounded;
}

GaussianTruth gaussian_truth(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidInput("gaussian_truth: sigma must be positive");
  const double mu = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  return {0.0, mu, -mu / (sigma * sigma)};
}

ReplicationRecord run_replication(double sigma, std::uint64_t n, const Schedules& schedules,
                                  double critical_value, RandomStream& rng, NuisanceSource nuisance,
                                  const SearchConfig& search) {
  const GaussianTruth truth = gaussian_truth(sigma);
  if (n < 2)
    throw InvalidInput("run_replication: n must be at least 2");
  std::vector<double> xs(n);
  for (auto& x : xs)
    x = rng.normal(0.0, sigma);

  const auto semi =
      estimate_flavor(Flavor::Semirecursive, xs, schedules, critical_value, truth, nuisance, search);
  const auto non =
      estimate_flavor(Flavor::Nonrecursive, xs, schedules, critical_value, truth, nuisance, search);

  const std::pair<double, double> target{truth.theta, truth.mu};
  ReplicationRecord r;
  r.theta = semi.theta;
  r.theta_star = non.theta;
  r.mu = semi.mu;
  r.mu_star = non.mu;
  r.f2 = semi.f2;
  r.f2_star = non.f2;
  r.b = semi.ellipsoid.theta_semi_axis();
  r.b_star = non.ellipsoid.theta_semi_axis();
  r.a = semi.ellipsoid.mu_semi_axis();
  r.a_star = non.ellipsoid.mu_semi_axis();
  r.statistic = semi.ellipsoid.statistic({semi.theta, semi.mu}, target);
  r.statistic_star = non.ellipsoid.statistic({non.theta, non.mu}, target);
  r.covered = ellipsoid_contains(semi.ellipsoid, {semi.theta, semi.mu}, target);
  r.covered_star = ellipsoid_contains(non.ellipsoid, {non.theta, non.mu}, target);
  return r;
}

std::vector<ReplicationRecord> run_replications(double sigma, std::uint64_t cell,
                                                const SimulationConfig& cfg,
                                                NuisanceSource nuisance) {
  validate(cfg);
  const std::uint64_t total = cfg.replications;
  const double critical_value = cfg.critical_value();
  std::vector<ReplicationRecord> records(total);

  unsigned threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads ? threads : 1, 1, total));

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::optional<std::uint64_t> failed_index;
  std::string failure;

  auto worker = [&] {
    for (;;) {
      if (failed.load())
        return;
      const std::uint64_t r = next.fetch_add(1);
      if (r >= total)
        return;
      try {
        RandomStream rng(stream_seed(cfg.seed, cell, r));
        records[r] = run_replication(sigma, cfg.n, cfg.schedules, critical_value, rng, nuisance,
                                     cfg.search);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!failed_index || r < *failed_index) {
          failed_index = r;
          failure = e.what();
        }
        failed.store(true);
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }

  if (failed_index) {
    std::ostringstream msg;
    msg << "replication " << *failed_index << " (sigma = " << sigma << ") failed: " << failure;
    throw NumericFailure(msg.str());
  }
  return records;
}

SimulationRow summarize(double sigma, const std::vector<ReplicationRecord>& records) {
  if (records.empty())
    throw InvalidInput("summarize: no replication records");
  CompensatedSum theta, theta_s, mu, mu_s, b, b_s, a, a_s, p, p_s;
  for (const auto& r : records) {
    theta.add(r.theta);
    theta_s.add(r.theta_star);
    mu.add(r.mu);
    mu_s.add(r.mu_star);
    b.add(r.b);
    b_s.add(r.b_star);
    a.add(r.a);
    a_s.add(r.a_star);
    p.add(r.covered ? 1.0 : 0.0);
    p_s.add(r.covered_star ? 1.0 : 0.0);
  }
  const double n = static_cast<double>(records.size());
  return {sigma,         theta.value() / n, theta_s.value() / n, mu.value() / n,
          mu_s.value() / n, b.value() / n,  b_s.value() / n,     a.value() / n,
          a_s.value() / n,  p.value() / n,  p_s.value() / n};
}

std::vector<SimulationRow> run_table1(const SimulationConfig& cfg) {
  validate(cfg);
  std::vector<SimulationRow> rows;
  rows.reserve(cfg.sigmas.size());
  for (std::size_t i = 0; i < cfg.sigmas.size(); ++i)
    rows.push_back(summarize(cfg.sigmas[i], run_replications(cfg.sigmas[i], i, cfg)));
  return rows;
}

std::vector<Table2Row> run_table2(const SimulationConfig& cfg) {
  validate(cfg);
  const Schedules& s = cfg.schedules;
  std::vector<Table2Row> rows;
  for (double sigma : cfg.sigmas) {
    const GaussianTruth truth = gaussian_truth(sigma);
    EllipsoidInputs in;
    in.n = cfg.n;
    in.h = s.location(cfg.n);
    in.h_tilde = s.size(cfg.n);
    in.f_at_theta = truth.mu;
    in.f2_at_theta = truth.f2;
    in.a = s.location.exponent();
    in.a_tilde = s.size.exponent();
    in.critical_value = cfg.critical_value();
    in.flavor = Flavor::Semirecursive;
    const auto semi = ellipsoid_coefficients(in, gaussian_constants());
    in.flavor = Flavor::Nonrecursive;
    const auto non = ellipsoid_coefficients(in, gaussian_constants());
    rows.push_back({sigma, semi.theta_semi_axis(), non.theta_semi_axis(), truth.mu,
                    semi.mu_semi_axis(), non.mu_semi_axis()});
  }
  return rows;
}

std::string table1_csv(const std::vector<SimulationRow>& rows) {
  std::string out =
      "sigma,mean_theta,mean_theta_star,mean_mu,mean_mu_star,b,b_star,a,a_star,p,p_star\n";
  for (const auto& r : rows) {
    for (double v : {r.sigma, r.mean_theta, r.mean_theta_star, r.mean_mu, r.mean_mu_star, r.b,
                     r.b_star, r.a, r.a_star, r.p}) {
      out += fmt6(v);
      out += ',';
    }
    out += fmt6(r.p_star);
    out += '\n';
  }
  return out;
}

std::string table2_csv(const std::vector<Table2Row>& rows) {
  std::string out = "sigma,b,b_star,mu,a,a_star\n";
  for (const auto& r : rows) {
    out += fmt6(r.sigma) + ',' + fmt6(r.b) + ',' + fmt6(r.b_star) + ',' + fmt6(r.mu) + ',' +
           fmt6(r.a) + ',' + fmt6(r.a_star) + '\n';
  }
  return out;
}

namespace {

std::string pretty_line(const std::vector<std::string>& cells) {
  std::string line;
  for (const auto& c : cells) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%12s", c.c_str());
    line += buf;
  }
  return line + '\n';
}

} // namespace

std::string table1_pretty(const std::vector<SimulationRow>& rows) {
  std::string out = pretty_line({"sigma", "theta", "theta*", "mu", "mu*", "b", "b*", "a", "a*",
                                 "p", "p*"});
  for (const auto& r : rows)
    out += pretty_line({fmt6(r.sigma), fmt6(r.mean_theta), fmt6(r.mean_theta_star),
                        fmt6(r.mean_mu), fmt6(r.mean_mu_star), fmt6(r.b), fmt6(r.b_star),
                        fmt6(r.a), fmt6(r.a_star), fmt6(r.p), fmt6(r.p_star)});
  return out;
}

std::string table2_pretty(const std::vector<Table2Row>& rows) {
  std::string out = pretty_line({"sigma", "b", "b*", "mu", "a", "a*"});
  for (const auto& r : rows)
    out += pretty_line({fmt6(r.sigma), fmt6(r.b), fmt6(r.b_star), fmt6(r.mu), fmt6(r.a),
                        fmt6(r.a_star)});
  return out;
}

} // namespace modekit
