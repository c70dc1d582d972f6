#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "modekit/bandwidth.hpp"
#include "modekit/errors.hpp"

using namespace modekit;

namespace {

// Independent transcription of the regime inequalities, strict floating
// comparisons only (callers avoid exact boundaries).
std::vector<RegimeCase> matching_cases(double a, double at, int d, int q) {
  std::vector<RegimeCase> out;
  const double D = d, Q = q;
  if (1 / (D + 4) < at && at < Q / (D + 2 * Q + 2) && at / Q < a && a < (1 - 2 * at) / (D + 2))
    out.push_back(RegimeCase::C1_i);
  if (1 / (D + 2 * Q) < at && at <= 1 / (D + 4) && 1 / (D + 2 * Q + 2) < a &&
      a < (1 + at * D) / (2 * (D + 2)))
    out.push_back(RegimeCase::C1_ii);
  if (0 < at && at < 1 / (D + 2 * Q) && at / 2 < a && a < 1 / (D + 2 * Q + 2))
    out.push_back(RegimeCase::C2_i);
  return out;
}

std::vector<BandwidthSchedule> sample_schedules() {
  return {BandwidthSchedule::inverse_log(1.0 / 7), BandwidthSchedule::inverse_log(0.2),
          BandwidthSchedule::constant(1.0 / 9), BandwidthSchedule::constant(0.3, 2.5),
          BandwidthSchedule({0.2, {SlowFactorKind::Log, 1.0}}),
          BandwidthSchedule({0.2, {SlowFactorKind::LogOverLogLog, 1.0}})};
}

} // namespace

TEST_CASE("schedule values at n = 100") {
  CHECK(BandwidthSchedule::inverse_log(1.0 / 7)(100) == doctest::Approx(0.1124709).epsilon(1e-6));
  CHECK(BandwidthSchedule::inverse_log(1.0 / 5)(100) == doctest::Approx(0.086447).epsilon(1e-5));
  CHECK(BandwidthSchedule::constant(1.0 / 9)(100) == doctest::Approx(0.599484).epsilon(1e-6));
}

TEST_CASE("the log factor is floored at one for small n") {
  const auto s = BandwidthSchedule::inverse_log(1.0 / 7);
  CHECK(s(1) == 1.0);
  CHECK(s(2) == doctest::Approx(std::pow(2.0, -1.0 / 7)));
  CHECK(s(3) == doctest::Approx(std::pow(3.0, -1.0 / 7) / std::log(3.0)));
  CHECK_THROWS_AS(s(0), InvalidInput);
}

TEST_CASE("schedule construction validates its parameters") {
  CHECK_THROWS_AS(BandwidthSchedule::constant(-0.1), InvalidInput);
  CHECK(BandwidthSchedule::fixed(0.7)(1) == 0.7);
  CHECK(BandwidthSchedule::fixed(0.7)(1000000) == 0.7);
  CHECK_THROWS_AS(BandwidthSchedule::constant(1.0), InvalidInput);
  CHECK_THROWS_AS(BandwidthSchedule::constant(0.2, -1.0), InvalidInput);
}

TEST_CASE("schedule strings") {
  const auto a = BandwidthSchedule::parse("n^-0.142857/log");
  CHECK(a.slow_factor().kind == SlowFactorKind::InverseLog);
  CHECK(a.exponent() == 0.142857);
  const auto b = BandwidthSchedule::parse("n^-0.111111");
  CHECK(b.slow_factor().kind == SlowFactorKind::Constant);
  const auto c = BandwidthSchedule::parse("0.5*n^-0.2*log/loglog");
  CHECK(c.slow_factor().kind == SlowFactorKind::LogOverLogLog);
  CHECK(c.slow_factor().constant == 0.5);
  CHECK(BandwidthSchedule::parse("n^-0.2*log").slow_factor().kind == SlowFactorKind::Log);
  for (const auto& s : sample_schedules()) {
    const auto back = BandwidthSchedule::parse(s.to_string());
    CHECK(back(12345) == s(12345));
  }
  CHECK_THROWS_AS(BandwidthSchedule::parse("h^-0.2"), InvalidInput);
  CHECK_THROWS_AS(BandwidthSchedule::parse("n^-abc"), InvalidInput);
  CHECK_THROWS_AS(BandwidthSchedule::parse("n^-0.2/sqrt"), InvalidInput);
  CHECK_THROWS_AS(BandwidthSchedule::parse("n^-1.5"), InvalidInput);
}

TEST_CASE("schedules are positive, vanish, and vary regularly") {
  for (const auto& s : sample_schedules()) {
    double prev = s(1);
    CHECK(prev > 0.0);
    for (std::uint64_t n = 10; n <= 10'000'000'000'000'000ULL; n *= 10) {
      CHECK(s(n) > 0.0);
      prev = s(n);
    }
    CHECK(prev < 0.05);

    // h(2n)/h(n) = 2^-a L(2n)/L(n); the slowly varying part converges at
    // rate log 2 / log n for the logarithmic factors.
    double last_dev = 1.0;
    for (double n : {1e3, 1e6, 1e9}) {
      const auto nn = static_cast<std::uint64_t>(n);
      const double ratio = s(2 * nn) / s(nn);
      const double dev = std::abs(ratio / std::pow(2.0, -s.exponent()) - 1.0);
      const bool logarithmic = s.slow_factor().kind != SlowFactorKind::Constant;
      CHECK(dev <= (logarithmic ? 1.05 * std::log(2.0) / std::log(n) : 0.01));
      CHECK(dev <= last_dev + 1e-15);
      last_dev = dev;
    }
  }
}

TEST_CASE("constant and inverse-log schedules decrease from n = 3 on") {
  for (const auto& s : {BandwidthSchedule::inverse_log(1.0 / 7), BandwidthSchedule::inverse_log(0.2),
                        BandwidthSchedule::constant(1.0 / 9), BandwidthSchedule::constant(0.01)})
    for (std::uint64_t n = 3; n < 5000; ++n)
      REQUIRE(s(n + 1) < s(n));
}

TEST_CASE("increasing slow factors still make the schedule eventually decrease") {
  for (const auto& s : {BandwidthSchedule({0.2, {SlowFactorKind::Log, 1.0}}),
                        BandwidthSchedule({0.2, {SlowFactorKind::LogOverLogLog, 1.0}})}) {
    const auto start = static_cast<std::uint64_t>(std::exp(2.0 / s.exponent()));
    for (std::uint64_t n = start; n < start + 5000; ++n)
      REQUIRE(s(n + 1) < s(n));
  }
}

TEST_CASE("regime classification examples") {
  const auto bal = classify_regime(1.0 / 7, 1.0 / 5, 1, 2);
  CHECK(bal.regime == Regime::Balanced);
  CHECK(bal.detail == RegimeCase::Balanced);

  CHECK(classify_regime(1.0 / (1 + 4 + 2), 1.0 / (1 + 4), 1, 2).regime == Regime::Balanced);
  CHECK(classify_regime(1.0 / (3 + 8 + 2), 1.0 / (3 + 8), 3, 4).regime == Regime::Balanced);

  const auto c2 = classify_regime(1.0 / 8, 1.0 / 10, 1, 2);
  CHECK(c2.regime == Regime::VarianceNegligible);
  CHECK(c2.detail == RegimeCase::C2_i);

  const auto c1i = classify_regime(0.16, 0.22, 1, 2);
  CHECK(c1i.regime == Regime::BiasNegligible);
  CHECK(c1i.detail == RegimeCase::C1_i);

  // C1-ii needs a non-empty (1/(d+2q), 1/(d+4)] interval, i.e. q > 2.
  const auto c1ii = classify_regime(0.13, 1.0 / 5, 1, 3);
  CHECK(c1ii.regime == Regime::BiasNegligible);
  CHECK(c1ii.detail == RegimeCase::C1_ii);

  const auto c2ii = classify_regime(0.13, 1.0 / 5, 1, 2);
  CHECK(c2ii.regime == Regime::VarianceNegligible);
  CHECK(c2ii.detail == RegimeCase::C2_ii);

  CHECK(classify_regime(0.5, 0.5, 1, 2).regime == Regime::Unclassified);

  CHECK_THROWS_AS(classify_regime(0.0, 0.2, 1, 2), InvalidInput);
  CHECK_THROWS_AS(classify_regime(0.2, 1.0, 1, 2), InvalidInput);
  CHECK_THROWS_AS(classify_regime(0.2, 0.2, 0, 2), InvalidInput);
  CHECK_THROWS_AS(classify_regime(0.2, 0.2, 1, 1), InvalidInput);
}

TEST_CASE("boundary ties are resolved with a relative tolerance") {
  // ã exactly on 1/(d+4) belongs to C1-ii (non-strict upper bound).
  const double at = 1.0 / 5.0 * (1 + 1e-14);
  const auto r = classify_regime(0.17, at, 1, 3);
  CHECK(r.detail == RegimeCase::C1_ii);
}

TEST_CASE("property: classification agrees with the printed inequalities and is exclusive") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  std::uniform_int_distribution<int> dd(1, 5), qq(2, 6);
  int hits = 0;
  for (int i = 0; i < 20000; ++i) {
    const double a = u(rng) * 0.4, at = u(rng) * 0.4;
    const int d = dd(rng), q = qq(rng);
    const auto cases = matching_cases(a, at, d, q);
    REQUIRE(cases.size() <= 1);
    const auto r = classify_regime(a, at, d, q);
    if (cases.empty()) {
      CHECK(r.regime == Regime::Unclassified);
    } else {
      ++hits;
      CHECK(r.detail == cases.front());
    }
  }
  CHECK(hits > 1000);
}

TEST_CASE("C1 drives n h^(d+2q+2) and n htilde^(d+2q) to zero") {
  const int d = 1, q = 2;
  for (auto [a, at] : {std::pair{0.16, 0.22}, std::pair{0.15, 0.25}}) {
    REQUIRE(classify_regime(a, at, d, q).regime == Regime::BiasNegligible);
    const auto h = BandwidthSchedule::constant(a);
    const auto ht = BandwidthSchedule::constant(at);
    double prev_h = INFINITY, prev_ht = INFINITY;
    for (double n : {1e3, 1e6, 1e9}) {
      const auto nn = static_cast<std::uint64_t>(n);
      const double vh = n * std::pow(h(nn), d + 2 * q + 2);
      const double vht = n * std::pow(ht(nn), d + 2 * q);
      CHECK(vh < prev_h);
      CHECK(vht < prev_ht);
      prev_h = vh;
      prev_ht = vht;
    }
    CHECK(prev_h < 0.5);
    CHECK(prev_ht < 0.2);
  }
}

TEST_CASE("validate_a3") {
  CHECK(validate_a3(1.0 / 7, 1.0 / 5, 1));
  CHECK_FALSE(validate_a3(1.0 / 4, 1.0 / 5, 1));
  CHECK(validate_a3(1e-9, 1e-9, 3));
  CHECK_FALSE(validate_a3(0.1, 1.0 / 3, 1));
  CHECK_FALSE(validate_a3(0.0, 0.1, 1));
}
