#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modekit/bandwidth.hpp"
#include "modekit/mode.hpp"
#include "modekit/random.hpp"

namespace modekit {

// Location (h), size (htilde) and curvature (hcheck) bandwidth schedules.
struct Schedules {
  BandwidthSchedule location = BandwidthSchedule::inverse_log(1.0 / 7.0);
  BandwidthSchedule size = BandwidthSchedule::inverse_log(1.0 / 5.0);
  BandwidthSchedule curvature = BandwidthSchedule::constant(1.0 / 9.0);
};

inline const std::vector<double> kDefaultSigmas = {0.3, 0.4, 0.5, 0.7, 0.75, 1.0, 1.5, 2.0, 2.5};

struct SimulationConfig {
  std::vector<double> sigmas = kDefaultSigmas;
  std::uint64_t n = 100;
  std::uint64_t replications = 5000;
  double alpha = 0.05;
  Schedules schedules;
  std::uint64_t seed = 0;
  unsigned threads = 0; // 0: hardware concurrency
  SearchConfig search;
  // The chi^2(2) critical value is rounded to this many decimals
  // (5.9915 -> 5.99 at alpha = 0.05, as quoted by the reference protocol);
  // nullopt uses the exact quantile.
  std::optional<int> critical_value_decimals = 2;

  double critical_value() const;
};

void validate(const SimulationConfig& cfg);

struct GaussianTruth {
  double theta = 0.0;
  double mu = 0.0; // f(theta)
  double f2 = 0.0; // f''(theta)
};

// Mode of the N(0, sigma^2) density.
GaussianTruth gaussian_truth(double sigma);

enum class NuisanceSource {
  Estimated, // plug in mu_n and the hcheck curvature estimate
  True,      // plug in f(theta) and f''(theta)
};

struct ReplicationRecord {
  double theta = 0.0, theta_star = 0.0;
  double mu = 0.0, mu_star = 0.0;
  double f2 = 0.0, f2_star = 0.0; // curvature used in P, P*
  double b = 0.0, b_star = 0.0;   // theta semi-axes
  double a = 0.0, a_star = 0.0;   // mu semi-axes
  double statistic = 0.0, statistic_star = 0.0; // quadratic forms at the truth
  bool covered = false, covered_star = false;
};

// One replication: n N(0, sigma^2) draws, semirecursive and nonrecursive
// estimators of (theta, mu), and both confidence ellipsoids.
ReplicationRecord run_replication(double sigma, std::uint64_t n, const Schedules& schedules,
                                  double critical_value, RandomStream& rng,
                                  NuisanceSource nuisance = NuisanceSource::Estimated,
                                  const SearchConfig& search = {});

// Replications for one sigma. Replication r uses stream_seed(seed, cell, r),
// so the result does not depend on the thread count.
std::vector<ReplicationRecord> run_replications(double sigma, std::uint64_t cell,
                                                const SimulationConfig& cfg,
                                                NuisanceSource nuisance = NuisanceSource::Estimated);

struct SimulationRow {
  double sigma = 0.0;
  double mean_theta = 0.0, mean_theta_star = 0.0;
  double mean_mu = 0.0, mean_mu_star = 0.0;
  double b = 0.0, b_star = 0.0;
  double a = 0.0, a_star = 0.0;
  double p = 0.0, p_star = 0.0;
};

SimulationRow summarize(double sigma, const std::vector<ReplicationRecord>& records);

std::vector<SimulationRow> run_table1(const SimulationConfig& cfg);

struct Table2Row {
  double sigma = 0.0;
  double b = 0.0, b_star = 0.0;
  double mu = 0.0;
  double a = 0.0, a_star = 0.0;
};

// Semi-axes of both ellipsoids with the true f(theta) and f''(theta); no sampling.
std::vector<Table2Row> run_table2(const SimulationConfig& cfg);

std::string table1_csv(const std::vector<SimulationRow>& rows);
std::string table2_csv(const std::vector<Table2Row>& rows);
std::string table1_pretty(const std::vector<SimulationRow>& rows);
std::string table2_pretty(const std::vector<Table2Row>& rows);

// printf("%.6g") in the C locale.
std::string format_number(double x);

} // namespace modekit
