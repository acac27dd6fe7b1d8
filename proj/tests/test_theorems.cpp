#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spartlab/errors.hpp"
#include "spartlab/theorems.hpp"

using namespace spartlab;

TEST_CASE("Newton polygon of x^2 - 2x - 4 at 2") {
  auto np = newton_polygon(IntegerPolynomial{-4, -2, 1}, 2);
  REQUIRE(np.valuations.size() == 1);
  CHECK(np.valuations[0].first == 1);
  CHECK(np.valuations[0].second == 2);
  CHECK(np.zero_roots == 0);
}

TEST_CASE("Newton polygon with two slopes and a zero root") {
  // x (x - 4)(x - 1) = x^3 - 5x^2 + 4x: roots 4 and 1 have 2-adic valuations 2, 0.
  auto np = newton_polygon(IntegerPolynomial{0, 4, -5, 1}, 2);
  CHECK(np.zero_roots == 1);
  REQUIRE(np.valuations.size() == 2);
  CHECK(np.valuations[0] == std::make_pair(mpq_class(2), 1));
  CHECK(np.valuations[1] == std::make_pair(mpq_class(0), 1));
  CHECK_THROWS_AS(newton_polygon(IntegerPolynomial{1, 1}, 4), ValidationError);
}

TEST_CASE("Newton polygon conserves the constant-term valuation") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int deg = 1 + static_cast<int>(rng() % 6);
    std::vector<mpz_class> c(deg + 1);
    for (int i = 0; i < deg; ++i) c[i] = static_cast<long>(rng() % 2001) - 1000;
    if (c[0] == 0) c[0] = 96;
    c[deg] = 1;
    const unsigned long p = std::vector<unsigned long>{2, 3, 5, 7}[rng() % 4];
    auto np = newton_polygon(IntegerPolynomial(c), p);
    mpq_class total = 0;
    int roots = 0;
    for (const auto& [v, m] : np.valuations) {
      total += v * m;
      roots += m;
    }
    long expect = 0;
    mpz_class rest = abs(c[0]);
    while (rest % p == 0) {
      rest /= p;
      ++expect;
    }
    CHECK(total == expect);
    CHECK(roots == deg);
  }
}

TEST_CASE("delta for Fibonacci and for x^2 - 2x - 4") {
  auto fib = delta(preset("fibonacci"), PrimeSet{2, 3, 5, 7});
  CHECK(fib.exactly_zero);
  CHECK(fib.delta == 0.0);
  CHECK(fib.gcd_condition);
  CHECK(fib.consistent);

  auto spec = make_spec("q", {2, 4}, {0, 1});
  auto d = delta(spec, PrimeSet{2});
  CHECK(std::fabs(d.delta - std::log(2.0) / std::log(1 + std::sqrt(5.0))) < 1e-12);
  CHECK_FALSE(d.gcd_condition);
  CHECK(d.gcd_value == 2);
  CHECK(d.consistent);

  auto unit = make_spec("unit", {0, 1}, {1, 1});  // roots +-1
  CHECK_THROWS_AS(delta(unit, PrimeSet{2}), ValidationError);
}

TEST_CASE("exponent series values") {
  auto series = exponent_series(preset("fibonacci"), 2, PrimeSet{2, 3}, {1, 20}, KSumMode::kAtMostK);
  bool saw144 = false, saw60 = false;
  for (const auto& s : series) {
    CHECK(s.spart * s.cofactor == s.value);
    if (s.value == 144) {
      saw144 = true;
      CHECK(s.exponent == 1.0);
    }
    if (s.value == 60) {
      saw60 = true;
      CHECK(s.exponent == doctest::Approx(std::log(12.0) / std::log(60.0)).epsilon(1e-14));
    }
    if (s.value == 1) CHECK(s.exponent == 0.0);
  }
  CHECK(saw144);
  CHECK(saw60);
  auto csv = series_csv(series);
  CHECK(csv.rfind("j,value,spart,cofactor,exponent,witness\n1,1,1,1,0.000000000000,1\n", 0) == 0);
}

TEST_CASE("exponent-trend verdicts") {
  CHECK(verify_thm1(adversarial_series()).verdict == TrendVerdict::kInconsistent);
  auto few = exponent_series(preset("fibonacci"), 1, PrimeSet{2}, {1, 6}, KSumMode::kAtMostK);
  CHECK(verify_thm1(few).verdict == TrendVerdict::kInconclusive);
  auto series = exponent_series(preset("fibonacci"), 2, PrimeSet{2, 3}, {1, 60}, KSumMode::kAtMostK);
  auto rep = verify_thm1(series);
  CHECK(rep.verdict == TrendVerdict::kConsistent);
  CHECK(rep.bands.size() >= kMinBands);
  CHECK_THROWS_AS(verify_thm1({}), ValidationError);
}

TEST_CASE("exponent-gap hypothesis gate") {
  auto two = make_spec("two", {3, -2}, {0, 1});
  auto series = exponent_series(two, 2, PrimeSet{3}, {1, 20}, KSumMode::kAtMostK);
  CHECK_THROWS_AS(verify_thm2(two, series, 5), HypothesisError);
  auto fib = preset("fibonacci");
  auto fs = exponent_series(fib, 2, PrimeSet{2, 3}, {1, 60}, KSumMode::kAtMostK);
  auto rep = verify_thm2(fib, fs, 200);
  CHECK(rep.positive);
  CHECK(rep.c_hat == doctest::Approx(1 - rep.tail_max));
  CHECK(rep.c2_proxy <= 200);
  CHECK_THROWS_AS(verify_thm2(fib, fs, 1'000'000), ValidationError);
}

TEST_CASE("prime-factor bound: domain threshold and right-hand side") {
  CHECK(thm3_domain_threshold() == 3814280);
  CHECK(std::isnan(thm3_rhs(3814279, 1, 0.1)));
  CHECK(thm3_rhs(3814280, 1, 0.1) > 0);
  mpz_class f100 = term(preset("fibonacci"), 100);
  const double rhs = thm3_rhs(f100, 1, 0.1);
  const double ll = std::log(std::log(f100.get_d()));
  CHECK(rhs == doctest::Approx(0.9 * ll * std::log(ll) / std::log(std::log(ll))).epsilon(1e-9));
  CHECK(rhs < 20);
}

TEST_CASE("prime-factor sweep for k = 1") {
  auto rep = verify_thm3(preset("fibonacci"), 1, {1, 90}, 0.1);
  CHECK(rep.violations == 0);
  CHECK(rep.unresolved == 0);
  CHECK(rep.in_domain > 0);
  auto vac = verify_thm3(preset("fibonacci"), 2, {1, 40}, 0.6);
  CHECK(vac.vacuous == vac.in_domain);
  CHECK_THROWS_AS(verify_thm3(preset("fibonacci"), 1, {1, 10}, 0.0), ValidationError);
}
