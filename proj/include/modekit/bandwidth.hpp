#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace modekit {

enum class SlowFactorKind {
  Constant,      // c
  InverseLog,    // 1 / log n
  Log,           // log n
  LogOverLogLog, // log n / log log n
};

struct SlowFactor {
  SlowFactorKind kind = SlowFactorKind::Constant;
  double constant = 1.0; // multiplies every kind
};

// Regularly varying bandwidth h(n) = n^{-a} L(n).
//
// Logarithms are natural and floored at 1 (log n -> max(log n, 1)) so that the
// schedule is finite and positive from the first observation on.
class BandwidthSchedule {
public:
  BandwidthSchedule(double exponent, SlowFactor factor = {});

  static BandwidthSchedule constant(double exponent, double c = 1.0);
  // h(n) = c for every n. Not regularly varying with a positive exponent, so
  // only meant for fixed-bandwidth estimates.
  static BandwidthSchedule fixed(double c);
  static BandwidthSchedule inverse_log(double exponent);

  // Parses "n^-0.142857/log", "n^-0.111111", "0.5*n^-0.2", "n^-0.2*log",
  // "n^-0.2*log/loglog".
  static BandwidthSchedule parse(std::string_view text);

  double exponent() const { return exponent_; }
  const SlowFactor& slow_factor() const { return factor_; }

  double evaluate(std::uint64_t n) const;
  double operator()(std::uint64_t n) const { return evaluate(n); }

  std::string to_string() const;

private:
  double exponent_;
  SlowFactor factor_;
};

enum class Regime { BiasNegligible, VarianceNegligible, Balanced, Unclassified };

enum class RegimeCase { C1_i, C1_ii, C2_i, C2_ii, Balanced, None };

struct RegimeClassification {
  Regime regime = Regime::Unclassified;
  RegimeCase detail = RegimeCase::None;
  std::string description;
};

// Sorts exponent pairs into the bias-negligible (C1), variance-negligible (C2)
// and balanced regimes of the joint location/size limit theory.
//
// Only the exponents are inspected. Case C2-ii additionally needs
// n^{atilde} htilde_n -> infinity, which the caller must check on the schedule.
RegimeClassification classify_regime(double a, double a_tilde, int d, int q);

// 0 < a < 1/(d+4) and 0 < a_tilde < 1/(d+2).
bool validate_a3(double a, double a_tilde, int d);

const char* to_string(Regime regime);
const char* to_string(RegimeCase c);

} // namespace modekit
