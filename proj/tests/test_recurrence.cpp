#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spartlab/errors.hpp"
#include "spartlab/recurrence.hpp"

using namespace spartlab;

TEST_CASE("preset terms match independently computed values") {
  CHECK(term(preset("fibonacci"), 90) == mpz_class("2880067194370816120"));
  CHECK(term(preset("pell"), 10) == 2378);
  CHECK(term(preset("pell"), 30) == mpz_class("107578520350"));
  CHECK(term(preset("tribonacci"), 20) == 35890);
  CHECK(term(preset("tribonacci"), 40) == mpz_class("7046319384"));
  CHECK(term(preset("lucas"), 10) == 123);
  CHECK(term(preset("lucas"), 30) == 1860498);
  CHECK_THROWS_AS(preset("padovan"), ValidationError);
}

TEST_CASE("terms and iterator agree with the defining relation") {
  auto spec = make_spec("mixed", {3, -1, 2}, {1, -4, 7});
  auto u = terms(spec, 60);
  REQUIRE(u.size() == 61);
  for (std::size_t n = 3; n < u.size(); ++n) CHECK(u[n] == 3 * u[n - 1] - u[n - 2] + 2 * u[n - 3]);
  TermIterator it(spec);
  for (std::size_t n = 0; n <= 60; ++n, ++it) CHECK(*it == u[n]);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(make_spec("bad", {1, 0}, {0, 1}), ValidationError);
  CHECK_THROWS_AS(make_spec("bad", {1, 1}, {0}), ValidationError);
  CHECK_THROWS_AS(make_spec("bad", {1, 1}, {0, 0}), ValidationError);
  CHECK_THROWS_AS(make_spec("bad", {}, {}), ValidationError);
}

TEST_CASE("json round trip with big integers") {
  auto j = nlohmann::json::parse(
      R"({"name":"big","coeffs":["123456789012345678901234567890", 1],"initial":[0, 1]})");
  auto spec = spec_from_json(j);
  CHECK(spec.coeffs[0] == mpz_class("123456789012345678901234567890"));
  auto back = spec_from_json(nlohmann::json::parse(spec_to_json(spec).dump()));
  CHECK(back.coeffs == spec.coeffs);
  CHECK(back.initial == spec.initial);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"coeffs":[1.5],"initial":[1]})")),
                  ValidationError);
  CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), ValidationError);
}

TEST_CASE("characteristic polynomial") {
  CHECK(char_poly(preset("fibonacci")) == IntegerPolynomial({-1, -1, 1}));
  CHECK(char_poly(preset("pell")) == IntegerPolynomial({-1, -2, 1}));
}

TEST_CASE("Fibonacci spectrum: golden ratio dominates") {
  auto sd = spectral(preset("fibonacci"));
  REQUIRE(sd.t() == 2);
  CHECK(sd.dominance == Verdict::kYes);
  CHECK(sd.degenerate == Verdict::kNo);
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(sd.poly.eval(sd.dominant().enclosure).contains_zero());
  CHECK(sd.dominant().enclosure.re().to_double() == doctest::Approx(phi).epsilon(1e-15));
  CHECK(sd.roots[1].enclosure.re().to_double() == doctest::Approx(1 - phi).epsilon(1e-15));
  CHECK_FALSE(sd.dominant_is_rational_integer);
}

TEST_CASE("degenerate and non-dominant spectra") {
  auto sd = spectral(IntegerPolynomial{-4, 0, 1});
  CHECK(sd.degenerate == Verdict::kYes);
  CHECK(sd.dominance == Verdict::kNo);
  REQUIRE(sd.witness);
  CHECK(sd.witness->order == 2);

  auto sq = spectral(IntegerPolynomial{2, -2, 1});  // 1 +- i
  CHECK(sq.dominance == Verdict::kNo);
  CHECK(sq.degenerate == Verdict::kYes);
  CHECK(sq.witness->order == 4);
}

TEST_CASE("tribonacci: one real root and a conjugate pair") {
  auto sd = spectral(preset("tribonacci"));
  REQUIRE(sd.t() == 3);
  CHECK(sd.dominance == Verdict::kYes);
  CHECK(sd.degenerate == Verdict::kNo);
  CHECK(sd.roots[0].is_real);
  CHECK(sd.roots[0].enclosure.re().to_double() == doctest::Approx(1.839286755214161));
  CHECK_FALSE(sd.roots[1].is_real);
  CHECK(sd.roots[1].conjugate == std::optional<std::size_t>(2));
  CHECK(sd.roots[1].modulus().mid_double() == doctest::Approx(0.7373527057603));
}

TEST_CASE("rational integer dominant root and multiplicities") {
  auto sd = spectral(IntegerPolynomial{2, -3, 1});  // roots 1, 2
  CHECK(sd.dominance == Verdict::kYes);
  CHECK(sd.dominant_is_rational_integer);
  CHECK(*sd.dominant_integer == 2);
  auto dbl = spectral(IntegerPolynomial{1, -2, 1});  // (x - 1)^2
  REQUIRE(dbl.t() == 1);
  CHECK(dbl.roots[0].multiplicity == 2);
}

TEST_CASE("minimal polynomial of roots") {
  IntegerPolynomial f = IntegerPolynomial{-1, -1, 1} * IntegerPolynomial{-3, 1};
  auto sd = spectral(f);
  REQUIRE(sd.t() == 3);
  CHECK(minimal_polynomial(sd, 0) == IntegerPolynomial({-3, 1}));
  CHECK(minimal_polynomial(sd, 1) == IntegerPolynomial({-1, -1, 1}));
}

TEST_CASE("multiplicative independence report") {
  auto rep = multiplicative_independence(spectral(preset("fibonacci")));
  CHECK(rep.hypothesis_met);
  CHECK(rep.product_modulus_one);
}

TEST_CASE("zero multiplicity scan") {
  auto spec = make_spec("line", {2, -1}, {-3, -2});  // U_n = n - 3
  CHECK(zero_multiplicity_scan(spec, 50) == std::vector<unsigned long>{3});
  CHECK(zero_multiplicity_scan(preset("fibonacci"), 50) == std::vector<unsigned long>{0});
}
