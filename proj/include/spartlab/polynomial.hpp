#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "spartlab/ball.hpp"

namespace spartlab {

/// Dense polynomial with big-integer coefficients, stored low degree first.
/// The zero polynomial has degree -1; otherwise the leading coefficient is
/// nonzero.
class IntegerPolynomial {
 public:
  IntegerPolynomial() = default;
  explicit IntegerPolynomial(std::vector<mpz_class> coeffs);
  IntegerPolynomial(std::initializer_list<long> coeffs);

  /// x^n - 1, x - c, and similar helpers.
  static IntegerPolynomial monomial(unsigned n, const mpz_class& c = 1);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_monic() const { return !is_zero() && coeffs_.back() == 1; }
  const std::vector<mpz_class>& coefficients() const noexcept { return coeffs_; }
  mpz_class coeff(int i) const;
  const mpz_class& leading() const { return coeffs_.back(); }

  mpz_class eval(const mpz_class& x) const;
  mpq_class eval(const mpq_class& x) const;
  Ball eval(const Ball& x) const;
  CBall eval(const CBall& x) const;

  IntegerPolynomial derivative() const;
  mpz_class content() const;
  IntegerPolynomial primitive_part() const;  // positive leading coefficient
  IntegerPolynomial reflect() const;         // p(-x)
  IntegerPolynomial scale_argument(const mpz_class& c) const;  // p(c x)
  /// Sum of absolute values of the coefficients.
  mpz_class length() const;

  std::string to_string(char var = 'x') const;

  friend bool operator==(const IntegerPolynomial& a, const IntegerPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }
  friend IntegerPolynomial operator+(const IntegerPolynomial& a, const IntegerPolynomial& b);
  friend IntegerPolynomial operator-(const IntegerPolynomial& a, const IntegerPolynomial& b);
  friend IntegerPolynomial operator*(const IntegerPolynomial& a, const IntegerPolynomial& b);

 private:
  void trim();
  std::vector<mpz_class> coeffs_;
};

/// Quotient when `den` divides `num` exactly in Z[x]; nullopt otherwise.
std::optional<IntegerPolynomial> exact_quotient(const IntegerPolynomial& num,
                                                const IntegerPolynomial& den);

/// Primitive gcd with positive leading coefficient (gcd(0, 0) = 0).
IntegerPolynomial gcd(const IntegerPolynomial& a, const IntegerPolynomial& b);

struct SquarefreeFactor {
  IntegerPolynomial factor;  // primitive, squarefree, positive leading coeff
  int multiplicity = 0;
};

/// Yun's algorithm: p = c * prod factor_i^multiplicity_i with pairwise coprime
/// squarefree factors. Constant factors are omitted.
std::vector<SquarefreeFactor> squarefree_decomposition(const IntegerPolynomial& p);
IntegerPolynomial squarefree_part(const IntegerPolynomial& p);

/// Number of distinct real roots of p (Sturm sequence, exact).
int count_real_roots(const IntegerPolynomial& p);

/// Determinant by fraction-free (Bareiss) elimination.
mpz_class determinant(std::vector<std::vector<mpz_class>> m);

mpz_class resultant(const IntegerPolynomial& a, const IntegerPolynomial& b);

/// Polynomial in y whose roots are the ratios beta/alpha over all ordered
/// pairs of roots (alpha, beta) of the squarefree polynomial f, i.e.
/// Res_x(f(x), f(y x)).
IntegerPolynomial root_ratio_polynomial(const IntegerPolynomial& f);

/// The n-th cyclotomic polynomial.
IntegerPolynomial cyclotomic(unsigned n);

unsigned long euler_phi(unsigned long n);

}  // namespace spartlab
