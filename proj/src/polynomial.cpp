#include "spartlab/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include "spartlab/errors.hpp"

namespace spartlab {

namespace {

using RatPoly = std::vector<mpq_class>;  // low degree first, trimmed

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly to_rational(const IntegerPolynomial& p) {
  RatPoly r;
  r.reserve(p.coefficients().size());
  for (const auto& c : p.coefficients()) r.emplace_back(c);
  return r;
}

// Primitive integer polynomial proportional to p, positive leading coefficient.
IntegerPolynomial to_primitive_integer(const RatPoly& p) {
  if (p.empty()) return {};
  mpz_class den = 1;
  for (const auto& c : p) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  }
  std::vector<mpz_class> coeffs;
  coeffs.reserve(p.size());
  for (const auto& c : p) {
    mpq_class scaled = c * den;
    coeffs.push_back(scaled.get_num());
  }
  return IntegerPolynomial(std::move(coeffs)).primitive_part();
}

// Division with remainder over Q.
std::pair<RatPoly, RatPoly> divmod(RatPoly num, const RatPoly& den) {
  if (den.empty()) throw ValidationError("polynomial division by zero");
  trim(num);
  if (num.size() < den.size()) return {RatPoly{}, num};
  RatPoly quot(num.size() - den.size() + 1);
  const mpq_class& lead = den.back();
  for (std::size_t i = num.size(); i-- >= den.size();) {
    mpq_class q = num[i] / lead;
    std::size_t shift = i - (den.size() - 1);
    quot[shift] = q;
    if (q != 0) {
      for (std::size_t j = 0; j < den.size(); ++j) num[shift + j] -= q * den[j];
    }
    if (i == 0) break;
  }
  trim(num);
  trim(quot);
  return {quot, num};
}

RatPoly derivative(const RatPoly& p) {
  RatPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

RatPoly monic_gcd(RatPoly a, RatPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    RatPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    mpq_class lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

RatPoly sub(const RatPoly& a, const RatPoly& b) {
  RatPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

int sign_changes(const std::vector<int>& signs) {
  int changes = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Sylvester matrix of two coefficient vectors (low degree first) with formal
// degrees a.size()-1 and b.size()-1.
std::vector<std::vector<mpz_class>> sylvester(const std::vector<mpz_class>& a,
                                              const std::vector<mpz_class>& b) {
  const std::size_t m = a.size() - 1, n = b.size() - 1, size = m + n;
  std::vector<std::vector<mpz_class>> s(size, std::vector<mpz_class>(size, 0));
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t j = 0; j <= m; ++j) s[row][row + j] = a[m - j];
  }
  for (std::size_t row = 0; row < m; ++row) {
    for (std::size_t j = 0; j <= n; ++j) s[n + row][row + j] = b[n - j];
  }
  return s;
}

}  // namespace

// ------------------------------------------------------ IntegerPolynomial

IntegerPolynomial::IntegerPolynomial(std::vector<mpz_class> coeffs)
    : coeffs_(std::move(coeffs)) {
  trim();
}

IntegerPolynomial::IntegerPolynomial(std::initializer_list<long> coeffs) {
  for (long c : coeffs) coeffs_.emplace_back(c);
  trim();
}

IntegerPolynomial IntegerPolynomial::monomial(unsigned n, const mpz_class& c) {
  std::vector<mpz_class> coeffs(n + 1, 0);
  coeffs[n] = c;
  return IntegerPolynomial(std::move(coeffs));
}

void IntegerPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

mpz_class IntegerPolynomial::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

mpz_class IntegerPolynomial::eval(const mpz_class& x) const {
  mpz_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

mpq_class IntegerPolynomial::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Ball IntegerPolynomial::eval(const Ball& x) const {
  Ball acc(x.precision());
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + Ball::from_int(*it, x.precision());
  }
  return acc;
}

CBall IntegerPolynomial::eval(const CBall& x) const {
  CBall acc(x.precision());
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + CBall::from_int(*it, x.precision());
  }
  return acc;
}

IntegerPolynomial IntegerPolynomial::derivative() const {
  std::vector<mpz_class> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    d.push_back(coeffs_[i] * static_cast<unsigned long>(i));
  }
  return IntegerPolynomial(std::move(d));
}

mpz_class IntegerPolynomial::content() const {
  mpz_class g = 0;
  for (const auto& c : coeffs_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

IntegerPolynomial IntegerPolynomial::primitive_part() const {
  if (is_zero()) return {};
  mpz_class g = content();
  if (leading() < 0) g = -g;
  std::vector<mpz_class> c;
  c.reserve(coeffs_.size());
  for (const auto& x : coeffs_) c.push_back(x / g);
  return IntegerPolynomial(std::move(c));
}

IntegerPolynomial IntegerPolynomial::reflect() const {
  std::vector<mpz_class> c = coeffs_;
  for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
  return IntegerPolynomial(std::move(c));
}

IntegerPolynomial IntegerPolynomial::scale_argument(const mpz_class& s) const {
  std::vector<mpz_class> c = coeffs_;
  mpz_class power = 1;
  for (auto& x : c) {
    x *= power;
    power *= s;
  }
  return IntegerPolynomial(std::move(c));
}

mpz_class IntegerPolynomial::length() const {
  mpz_class sum = 0;
  for (const auto& c : coeffs_) sum += abs(c);
  return sum;
}

std::string IntegerPolynomial::to_string(char var) const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    mpz_class mag = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (mag != 1 || i == 0) out << mag.get_str();
    if (i >= 1) out << var;
    if (i >= 2) out << "^" << i;
  }
  return out.str();
}

IntegerPolynomial operator+(const IntegerPolynomial& a, const IntegerPolynomial& b) {
  std::vector<mpz_class> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return IntegerPolynomial(std::move(c));
}

IntegerPolynomial operator-(const IntegerPolynomial& a, const IntegerPolynomial& b) {
  std::vector<mpz_class> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
  return IntegerPolynomial(std::move(c));
}

IntegerPolynomial operator*(const IntegerPolynomial& a, const IntegerPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpz_class> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return IntegerPolynomial(std::move(c));
}

// ------------------------------------------------------------ algorithms

std::optional<IntegerPolynomial> exact_quotient(const IntegerPolynomial& num,
                                                const IntegerPolynomial& den) {
  if (den.is_zero()) throw ValidationError("polynomial division by zero");
  if (num.is_zero()) return IntegerPolynomial{};
  if (num.degree() < den.degree()) return std::nullopt;
  std::vector<mpz_class> rem = num.coefficients();
  const auto& d = den.coefficients();
  const std::size_t dn = d.size();
  std::vector<mpz_class> quot(rem.size() - dn + 1, 0);
  for (std::size_t i = rem.size(); i-- >= dn;) {
    if (rem[i] != 0) {
      if (!mpz_divisible_p(rem[i].get_mpz_t(), d.back().get_mpz_t())) return std::nullopt;
      mpz_class q = rem[i] / d.back();
      std::size_t shift = i - (dn - 1);
      quot[shift] = q;
      for (std::size_t j = 0; j < dn; ++j) rem[shift + j] -= q * d[j];
    }
    if (i == 0) break;
  }
  for (const auto& r : rem) {
    if (r != 0) return std::nullopt;
  }
  return IntegerPolynomial(std::move(quot));
}

IntegerPolynomial gcd(const IntegerPolynomial& a, const IntegerPolynomial& b) {
  return to_primitive_integer(monic_gcd(to_rational(a), to_rational(b)));
}

std::vector<SquarefreeFactor> squarefree_decomposition(const IntegerPolynomial& p) {
  std::vector<SquarefreeFactor> out;
  if (p.degree() < 1) return out;
  RatPoly f = to_rational(p);
  RatPoly fp = derivative(f);
  RatPoly a0 = monic_gcd(f, fp);
  RatPoly b = divmod(f, a0).first;
  RatPoly c = divmod(fp, a0).first;
  RatPoly d = sub(c, derivative(b));
  for (int i = 1; b.size() > 1; ++i) {
    RatPoly a = monic_gcd(b, d);
    if (a.size() > 1) out.push_back({to_primitive_integer(a), i});
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    d = sub(c, derivative(b));
  }
  return out;
}

IntegerPolynomial squarefree_part(const IntegerPolynomial& p) {
  IntegerPolynomial result{1};
  for (const auto& f : squarefree_decomposition(p)) result = result * f.factor;
  return result.primitive_part();
}

int count_real_roots(const IntegerPolynomial& p) {
  if (p.degree() < 1) return 0;
  std::vector<RatPoly> seq{to_rational(p), derivative(to_rational(p))};
  while (!seq.back().empty()) {
    RatPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
    for (auto& x : r) x = -x;
    if (r.empty()) break;
    seq.push_back(std::move(r));
  }
  std::vector<int> at_neg, at_pos;
  for (const auto& q : seq) {
    if (q.empty()) continue;
    int lead = sgn(q.back());
    int deg = static_cast<int>(q.size()) - 1;
    at_pos.push_back(lead);
    at_neg.push_back(deg % 2 == 0 ? lead : -lead);
  }
  return sign_changes(at_neg) - sign_changes(at_pos);
}

mpz_class determinant(std::vector<std::vector<mpz_class>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

mpz_class resultant(const IntegerPolynomial& a, const IntegerPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  if (a.degree() == 0 && b.degree() == 0) return 1;
  return determinant(sylvester(a.coefficients(), b.coefficients()));
}

IntegerPolynomial root_ratio_polynomial(const IntegerPolynomial& f) {
  const int d = f.degree();
  if (d < 1) throw ValidationError("root ratio polynomial needs degree >= 1");
  const int points = d * d + 1;
  std::vector<mpq_class> xs, ys;
  for (int y = 0; y < points; ++y) {
    std::vector<mpz_class> g = f.coefficients();
    mpz_class power = 1;
    for (auto& c : g) {
      c *= power;
      power *= y;
    }
    xs.emplace_back(y);
    ys.emplace_back(determinant(sylvester(f.coefficients(), g)));
  }
  // Newton divided differences, then expand to the monomial basis.
  std::vector<mpq_class> dd = ys;
  for (int level = 1; level < points; ++level) {
    for (int i = points - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
    }
  }
  RatPoly result{dd[points - 1]};
  for (int i = points - 2; i >= 0; --i) {
    RatPoly next(result.size() + 1);
    for (std::size_t j = 0; j < result.size(); ++j) {
      next[j + 1] += result[j];
      next[j] -= result[j] * xs[i];
    }
    next[0] += dd[i];
    result = std::move(next);
  }
  trim(result);
  std::vector<mpz_class> coeffs;
  for (const auto& c : result) {
    if (c.get_den() != 1) throw InternalError("non-integral root ratio polynomial");
    coeffs.push_back(c.get_num());
  }
  return IntegerPolynomial(std::move(coeffs));
}

unsigned long euler_phi(unsigned long n) {
  unsigned long result = n;
  for (unsigned long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

IntegerPolynomial cyclotomic(unsigned n) {
  if (n == 0) throw ValidationError("cyclotomic polynomial of order 0");
  std::vector<unsigned> primes;
  unsigned m = n, rad = 1;
  for (unsigned p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      primes.push_back(p);
      rad *= p;
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) {
    primes.push_back(m);
    rad *= m;
  }
  auto compose_power = [](const IntegerPolynomial& q, unsigned e) {
    std::vector<mpz_class> c(static_cast<std::size_t>(q.degree()) * e + 1, 0);
    for (int i = 0; i <= q.degree(); ++i) c[static_cast<std::size_t>(i) * e] = q.coeff(i);
    return IntegerPolynomial(std::move(c));
  };
  IntegerPolynomial phi{-1, 1};
  for (unsigned p : primes) {
    auto q = exact_quotient(compose_power(phi, p), phi);
    if (!q) throw InternalError("cyclotomic construction failed");
    phi = *q;
  }
  return compose_power(phi, n / rad);
}

}  // namespace spartlab
