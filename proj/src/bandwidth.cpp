#include "modekit/bandwidth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "modekit/errors.hpp"

namespace modekit {

namespace {

constexpr double kBoundaryRelTol = 1e-12;

bool same(double x, double y) {
  return std::abs(x - y) <= kBoundaryRelTol * std::max(std::abs(x), std::abs(y));
}
bool less(double x, double y) { return x < y && !same(x, y); }
bool less_eq(double x, double y) { return x < y || same(x, y); }

double floored_log(double x) { return std::max(std::log(x), 1.0); }

double parse_number(std::string_view text, std::string_view whole) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw InvalidInput("bandwidth schedule: cannot parse number '" + std::string(text) + "' in '" +
                       std::string(whole) + "'");
  return value;
}

} // namespace

BandwidthSchedule::BandwidthSchedule(double exponent, SlowFactor factor)
    : exponent_(exponent), factor_(factor) {
  if (!(exponent >= 0.0 && exponent < 1.0))
    throw InvalidInput("bandwidth schedule: exponent must lie in [0, 1)");
  if (!(factor.constant > 0.0) || !std::isfinite(factor.constant))
    throw InvalidInput("bandwidth schedule: constant factor must be positive");
}

BandwidthSchedule BandwidthSchedule::constant(double exponent, double c) {
  return {exponent, {SlowFactorKind::Constant, c}};
}

BandwidthSchedule BandwidthSchedule::fixed(double c) {
  return {0.0, {SlowFactorKind::Constant, c}};
}

BandwidthSchedule BandwidthSchedule::inverse_log(double exponent) {
  return {exponent, {SlowFactorKind::InverseLog, 1.0}};
}

double BandwidthSchedule::evaluate(std::uint64_t n) const {
  if (n == 0)
    throw InvalidInput("bandwidth schedule: n must be at least 1");
  const double x = static_cast<double>(n);
  const double base = factor_.constant * std::pow(x, -exponent_);
  switch (factor_.kind) {
  case SlowFactorKind::Constant:
    return base;
  case SlowFactorKind::InverseLog:
    return base / floored_log(x);
  case SlowFactorKind::Log:
    return base * floored_log(x);
  case SlowFactorKind::LogOverLogLog: {
    const double l = floored_log(x);
    return base * l / floored_log(l);
  }
  }
  return base;
}

BandwidthSchedule BandwidthSchedule::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ')
      s.push_back(c);
  std::string_view v = s;

  double c = 1.0;
  if (auto star = v.find("*n^"); star != std::string_view::npos) {
    c = parse_number(v.substr(0, star), text);
    v.remove_prefix(star + 1);
  }
  if (!v.starts_with("n^-"))
    throw InvalidInput("bandwidth schedule: expected 'n^-<a>' in '" + std::string(text) + "'");
  v.remove_prefix(3);

  const auto suffix_at = v.find_first_of("*/");
  const double a = parse_number(v.substr(0, suffix_at), text);
  const std::string_view suffix =
      suffix_at == std::string_view::npos ? std::string_view{} : v.substr(suffix_at);

  SlowFactorKind kind;
  if (suffix.empty())
    kind = SlowFactorKind::Constant;
  else if (suffix == "/log")
    kind = SlowFactorKind::InverseLog;
  else if (suffix == "*log")
    kind = SlowFactorKind::Log;
  else if (suffix == "*log/loglog")
    kind = SlowFactorKind::LogOverLogLog;
  else
    throw InvalidInput("bandwidth schedule: unknown slowly varying factor '" +
                       std::string(suffix) + "'");
  return {a, {kind, c}};
}

std::string BandwidthSchedule::to_string() const {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(17);
  if (factor_.constant != 1.0)
    out << factor_.constant << '*';
  out << "n^-" << exponent_;
  switch (factor_.kind) {
  case SlowFactorKind::Constant:
    break;
  case SlowFactorKind::InverseLog:
    out << "/log";
    break;
  case SlowFactorKind::Log:
    out << "*log";
    break;
  case SlowFactorKind::LogOverLogLog:
    out << "*log/loglog";
    break;
  }
  return out.str();
}

bool validate_a3(double a, double a_tilde, int d) {
  if (d < 1)
    return false;
  return a > 0.0 && a < 1.0 / (d + 4) && a_tilde > 0.0 && a_tilde < 1.0 / (d + 2);
}

RegimeClassification classify_regime(double a, double a_tilde, int d, int q) {
  if (!(a > 0.0 && a < 1.0) || !(a_tilde > 0.0 && a_tilde < 1.0))
    throw InvalidInput("classify_regime: exponents must lie in (0, 1)");
  if (d < 1 || q < 2)
    throw InvalidInput("classify_regime: need d >= 1 and q >= 2");

  const double dd = d;
  const double qq = q;
  const double a_bal = 1.0 / (dd + 2 * qq + 2);
  const double at_bal = 1.0 / (dd + 2 * qq);

  if (same(a, a_bal) && same(a_tilde, at_bal))
    return {Regime::Balanced, RegimeCase::Balanced,
            "a = 1/(d+2q+2) and atilde = 1/(d+2q): bias and variance of the same order"};

  // C1-i: 1/(d+4) < at < q/(d+2q+2) and at/q < a < (1-2at)/(d+2)
  if (less(1.0 / (dd + 4), a_tilde) && less(a_tilde, qq / (dd + 2 * qq + 2)) &&
      less(a_tilde / qq, a) && less(a, (1 - 2 * a_tilde) / (dd + 2)))
    return {Regime::BiasNegligible, RegimeCase::C1_i, "C1-i: bias negligible"};

  // C1-ii: 1/(d+2q) < at <= 1/(d+4) and 1/(d+2q+2) < a < (1+at d)/(2(d+2))
  if (less(at_bal, a_tilde) && less_eq(a_tilde, 1.0 / (dd + 4)) && less(a_bal, a) &&
      less(a, (1 + a_tilde * dd) / (2 * (dd + 2))))
    return {Regime::BiasNegligible, RegimeCase::C1_ii, "C1-ii: bias negligible"};

  // C2-i: 0 < at < 1/(d+2q) and at/2 < a < 1/(d+2q+2)
  if (less(a_tilde, at_bal) && less(a_tilde / 2, a) && less(a, a_bal))
    return {Regime::VarianceNegligible, RegimeCase::C2_i, "C2-i: variance negligible"};

  // C2-ii: at = 1/(d+2q) and 1/(2(d+2q)) < a < 1/(d+2q+2); also needs
  // n^{at} htilde_n -> infinity.
  if (same(a_tilde, at_bal) && less(1.0 / (2 * (dd + 2 * qq)), a) && less(a, a_bal))
    return {Regime::VarianceNegligible, RegimeCase::C2_ii,
            "C2-ii: variance negligible provided n^atilde * htilde_n -> infinity"};

  return {Regime::Unclassified, RegimeCase::None, "no listed regime applies"};
}

const char* to_string(Regime regime) {
  switch (regime) {
  case Regime::BiasNegligible:
    return "BiasNegligible_C1";
  case Regime::VarianceNegligible:
    return "VarianceNegligible_C2";
  case Regime::Balanced:
    return "Balanced";
  case Regime::Unclassified:
    return "Unclassified";
  }
  return "?";
}

const char* to_string(RegimeCase c) {
  switch (c) {
  case RegimeCase::C1_i:
    return "C1-i";
  case RegimeCase::C1_ii:
    return "C1-ii";
  case RegimeCase::C2_i:
    return "C2-i";
  case RegimeCase::C2_ii:
    return "C2-ii";
  case RegimeCase::Balanced:
    return "balanced";
  case RegimeCase::None:
    return "none";
  }
  return "?";
}

} // namespace modekit
