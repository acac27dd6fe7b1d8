#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spartlab/polynomial.hpp"

using namespace spartlab;

TEST_CASE("construction trims and evaluates") {
  IntegerPolynomial p{-1, -1, 1, 0, 0};
  CHECK(p.degree() == 2);
  CHECK(p.eval(mpz_class(3)) == 5);
  CHECK(p.eval(mpq_class(1, 2)) == mpq_class(-5, 4));
  CHECK(p.to_string() == "x^2 - x - 1");
  CHECK(IntegerPolynomial{}.is_zero());
}

TEST_CASE("arithmetic and derivative") {
  IntegerPolynomial a{1, 1}, b{-1, 1};
  CHECK(a * b == IntegerPolynomial({-1, 0, 1}));
  CHECK((a * b).derivative() == IntegerPolynomial({0, 2}));
  CHECK(a + b == IntegerPolynomial({0, 2}));
  CHECK(IntegerPolynomial({1, 2, 3}).reflect() == IntegerPolynomial({1, -2, 3}));
  CHECK(IntegerPolynomial({4, 6}).content() == 2);
}

TEST_CASE("exact quotient and gcd") {
  IntegerPolynomial f = IntegerPolynomial{-1, 1} * IntegerPolynomial{2, 1} * IntegerPolynomial{3, 0, 1};
  auto q = exact_quotient(f, IntegerPolynomial{2, 1});
  REQUIRE(q);
  CHECK(*q == IntegerPolynomial{-1, 1} * IntegerPolynomial{3, 0, 1});
  CHECK_FALSE(exact_quotient(f, IntegerPolynomial{5, 1}));
  CHECK(gcd(f, IntegerPolynomial{-1, 0, 1}) == IntegerPolynomial{-1, 1});
}

TEST_CASE("squarefree decomposition") {
  IntegerPolynomial lin{-1, 1}, other{2, 1};
  IntegerPolynomial f = lin * lin * lin * other;
  auto dec = squarefree_decomposition(f);
  REQUIRE(dec.size() == 2);
  int seen = 0;
  for (const auto& d : dec) {
    if (d.factor == lin) seen += 10 * d.multiplicity;
    if (d.factor == other) seen += d.multiplicity;
  }
  CHECK(seen == 31);
  CHECK(squarefree_part(f) == lin * other);
}

TEST_CASE("Sturm counts") {
  CHECK(count_real_roots(IntegerPolynomial{-1, -1, 1}) == 2);
  CHECK(count_real_roots(IntegerPolynomial{1, 0, 1}) == 0);
  CHECK(count_real_roots(IntegerPolynomial{-1, -1, -1, 1}) == 1);
}

TEST_CASE("resultant against products over roots") {
  // Res(x^2 - 1, x - 2) = (1 - 2)(-1 - 2) up to sign.
  CHECK(abs(resultant(IntegerPolynomial{-1, 0, 1}, IntegerPolynomial{-2, 1})) == 3);
  CHECK(resultant(IntegerPolynomial{-1, 1}, IntegerPolynomial{-1, 0, 1}) == 0);
  CHECK(determinant({{2, 1}, {1, 3}}) == 5);
}

TEST_CASE("cyclotomic polynomials and phi") {
  CHECK(cyclotomic(1) == IntegerPolynomial({-1, 1}));
  CHECK(cyclotomic(4) == IntegerPolynomial({1, 0, 1}));
  CHECK(cyclotomic(12) == IntegerPolynomial({1, 0, -1, 0, 1}));
  for (unsigned n = 1; n <= 30; ++n) CHECK(cyclotomic(n).degree() == static_cast<int>(euler_phi(n)));
  // x^n - 1 is the product of Phi_d over d | n.
  for (unsigned n = 1; n <= 24; ++n) {
    IntegerPolynomial prod{1};
    for (unsigned d = 1; d <= n; ++d) {
      if (n % d == 0) prod = prod * cyclotomic(d);
    }
    CHECK(prod == IntegerPolynomial::monomial(n) - IntegerPolynomial{1});
  }
}

TEST_CASE("root ratio polynomial vanishes at 1 and at ratios") {
  // Roots 2 and -2: ratios 1 and -1.
  IntegerPolynomial r = root_ratio_polynomial(IntegerPolynomial{-4, 0, 1});
  CHECK(r.eval(mpz_class(1)) == 0);
  CHECK(r.eval(mpz_class(-1)) == 0);
  IntegerPolynomial s = root_ratio_polynomial(IntegerPolynomial{2, -3, 1});
  CHECK(s.eval(mpz_class(1)) == 0);
}

TEST_CASE("root ratio polynomial for roots 1 and 2") {
  IntegerPolynomial s = root_ratio_polynomial(IntegerPolynomial{2, -3, 1});
  CHECK(s.eval(mpq_class(1, 2)) == 0);
  CHECK(s.eval(mpz_class(2)) == 0);
}
