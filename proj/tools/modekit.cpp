// modekit: kernel estimation of the location and size of the mode of a
// density, with chi^2(2) confidence ellipsoids and simulation campaigns.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modekit/csv.hpp"
#include "modekit/errors.hpp"
#include "modekit/inference.hpp"
#include "modekit/mode.hpp"
#include "modekit/montecarlo.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitNumeric = 4;

struct EstimateOptions {
  std::string input;
  std::string flavor = "semirecursive";
  double a = 1.0 / 7.0;
  double a_tilde = 1.0 / 5.0;
  double a_check = 1.0 / 9.0;
  std::string h, h_tilde, h_check; // schedule strings override the exponents
  bool ellipsoid = false;
  bool no_ellipsoid = false;
  double alpha = 0.05;
  int grid = 0;
};

struct SimulateOptions {
  std::vector<double> sigmas = modekit::kDefaultSigmas;
  std::uint64_t n = 100;
  std::uint64_t replications = 5000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool pretty = false;
  bool exact_critical_value = false;
};

modekit::Schedules make_schedules(const EstimateOptions& o) {
  using modekit::BandwidthSchedule;
  return {o.h.empty() ? BandwidthSchedule::inverse_log(o.a) : BandwidthSchedule::parse(o.h),
          o.h_tilde.empty() ? BandwidthSchedule::inverse_log(o.a_tilde)
                            : BandwidthSchedule::parse(o.h_tilde),
          o.h_check.empty() ? BandwidthSchedule::constant(o.a_check)
                            : BandwidthSchedule::parse(o.h_check)};
}

void print(const std::string& key, double value) {
  std::cout << key << ',' << modekit::format_number(value) << '\n';
}

int run_estimate(const EstimateOptions& o) {
  using namespace modekit;
  const Dataset data = read_csv_file(o.input);
  const Flavor flavor = o.flavor == "nonrecursive" ? Flavor::Nonrecursive : Flavor::Semirecursive;
  const bool want_ellipsoid = !o.no_ellipsoid && (o.ellipsoid || data.dimension == 1);
  if (want_ellipsoid && data.dimension != 1)
    throw Unsupported("--ellipsoid requires one-dimensional data, input has " +
                      std::to_string(data.dimension) + " columns");
  if (want_ellipsoid && data.rows < 2)
    throw InvalidInput("the confidence ellipsoid needs at least 2 rows");

  const Schedules s = make_schedules(o);
  const auto kernel = gaussian_kernel(static_cast<int>(data.dimension));
  DensityEstimator loc(flavor, kernel, s.location);
  DensityEstimator size(flavor, kernel, s.size);
  const std::span<const double> values(data.values);
  for (std::size_t i = 0; i < data.rows; ++i) {
    const auto row = values.subspan(i * data.dimension, data.dimension);
    loc.observe(row);
    size.observe(row);
  }

  SearchConfig search;
  if (o.grid > 0)
    search.grid_points_per_dim = o.grid;
  const ModeEstimate mode = locate_mode(loc, search);
  const double mu = estimate_size(mode.location, size);

  std::cout << "flavor," << to_string(flavor) << '\n';
  std::cout << "n," << data.rows << '\n';
  if (data.dimension == 1) {
    print("theta", mode.location[0]);
  } else {
    for (std::size_t j = 0; j < data.dimension; ++j)
      print("theta_" + std::to_string(j + 1), mode.location[j]);
  }
  print("mu", mu);
  print("gradient_norm", mode.diagnostics.gradient_norm);
  std::cout << "newton_steps," << mode.diagnostics.refinement_steps << '\n';

  if (want_ellipsoid) {
    const double theta = mode.location[0];
    EllipsoidInputs in;
    in.n = data.rows;
    in.h = s.location(data.rows);
    in.h_tilde = s.size(data.rows);
    in.f_at_theta = mu;
    in.f2_at_theta = estimate_second_derivative(data.values, kernel, s.curvature, theta, flavor);
    in.a = s.location.exponent();
    in.a_tilde = s.size.exponent();
    in.alpha = o.alpha;
    in.flavor = flavor;
    const auto e = ellipsoid_coefficients(in, compute_constants(*kernel));
    print("f2", in.f2_at_theta);
    print("P", e.p_coeff);
    print("Q", e.q_coeff);
    print("c_alpha", e.c_alpha);
    print("theta_semi_axis", e.theta_semi_axis());
    print("mu_semi_axis", e.mu_semi_axis());
  }
  return 0;
}

modekit::SimulationConfig make_config(const SimulateOptions& o) {
  modekit::SimulationConfig cfg;
  cfg.sigmas = o.sigmas;
  cfg.n = o.n;
  cfg.replications = o.replications;
  cfg.alpha = o.alpha;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  if (o.exact_critical_value)
    cfg.critical_value_decimals.reset();
  modekit::validate(cfg);
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel estimation of the location and size of the mode of a density"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option defaults (flags take precedence)");

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the mode of a CSV sample");
  estimate->add_option("file", est.input, "Headerless CSV, one observation per row")
      ->required();
  estimate->add_option("--flavor", est.flavor, "semirecursive or nonrecursive")
      ->check(CLI::IsMember({"semirecursive", "nonrecursive"}));
  estimate->add_option("--a", est.a, "Location bandwidth exponent (h_n = n^-a / log n)");
  estimate->add_option("--atilde", est.a_tilde, "Size bandwidth exponent");
  estimate->add_option("--acheck", est.a_check, "Curvature bandwidth exponent (n^-acheck)");
  estimate->add_option("--h-schedule", est.h, "Location bandwidth schedule, e.g. 'n^-0.142857/log'");
  estimate->add_option("--htilde-schedule", est.h_tilde, "Size bandwidth schedule");
  estimate->add_option("--hcheck-schedule", est.h_check, "Curvature bandwidth schedule");
  auto* ell = estimate->add_flag("--ellipsoid", est.ellipsoid, "Report the confidence ellipsoid");
  estimate->add_flag("--no-ellipsoid", est.no_ellipsoid, "Skip the confidence ellipsoid")
      ->excludes(ell);
  estimate->add_option("--alpha", est.alpha, "Ellipsoid level alpha")
      ->check(CLI::Range(0.0, 1.0));
  estimate->add_option("--grid", est.grid, "Grid points per dimension for the argmax scan")
      ->check(CLI::Range(2, 1 << 20));

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Coverage study for N(0, sigma^2) samples");
  simulate->add_option("--sigmas", sim.sigmas, "Comma-separated sigma values")->delimiter(',');
  simulate->add_option("--n", sim.n, "Sample size per replication");
  simulate->add_option("--replications", sim.replications, "Replications per sigma");
  simulate->add_option("--alpha", sim.alpha, "Ellipsoid level alpha");
  simulate->add_option("--seed", sim.seed, "Master seed")->required();
  simulate->add_option("--threads", sim.threads, "Worker threads (0: all cores)");
  simulate->add_flag("--pretty", sim.pretty, "Aligned columns instead of CSV");
  simulate->add_flag("--exact-critical-value", sim.exact_critical_value,
                     "Use the exact chi^2(2) quantile instead of rounding it to 2 decimals");

  SimulateOptions t2;
  auto* table2 = app.add_subcommand("table2", "Ellipsoid semi-axes under the true parameters");
  table2->add_option("--sigmas", t2.sigmas, "Comma-separated sigma values")->delimiter(',');
  table2->add_option("--n", t2.n, "Sample size");
  table2->add_option("--alpha", t2.alpha, "Ellipsoid level alpha");
  table2->add_flag("--pretty", t2.pretty, "Aligned columns instead of CSV");
  table2->add_flag("--exact-critical-value", t2.exact_critical_value,
                   "Use the exact chi^2(2) quantile instead of rounding it to 2 decimals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*estimate)
      return run_estimate(est);
    if (*simulate) {
      const auto rows = modekit::run_table1(make_config(sim));
      std::cout << (sim.pretty ? modekit::table1_pretty(rows) : modekit::table1_csv(rows));
      return 0;
    }
    if (*table2) {
      const auto rows = modekit::run_table2(make_config(t2));
      std::cout << (t2.pretty ? modekit::table2_pretty(rows) : modekit::table2_csv(rows));
      return 0;
    }
  } catch (const modekit::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const modekit::Unsupported& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitInput;
}
