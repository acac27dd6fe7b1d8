#include "spartlab/binet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spartlab/errors.hpp"

namespace spartlab {

namespace {

double mid_abs(const CBall& z) { return z.abs().mid_double(); }

// log of the midpoint modulus, robust to values beyond double range.
double log_abs(const CBall& z) {
  Real m(z.precision());
  mpfr_hypot(m.get(), z.re().get(), z.im().get(), MPFR_RNDN);
  if (mpfr_zero_p(m.get())) return -std::numeric_limits<double>::infinity();
  mpfr_log(m.get(), m.get(), MPFR_RNDN);
  return m.to_double();
}

double log_abs(const mpz_class& v) {
  long exp = 0;
  double d = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(std::fabs(d)) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace

CBall BinetCoefficients::f(std::size_t i, unsigned long n) const {
  const auto& b = beta.at(i);
  CBall x = CBall::from_int(mpz_class(n), precision());
  CBall acc(precision());
  for (auto it = b.rbegin(); it != b.rend(); ++it) acc = acc * x + *it;
  return acc;
}

BinetCoefficients solve_coefficients(const RecurrenceSpec& spec, const SpectralData& sd) {
  spec.validate();
  const std::size_t r = spec.coeffs.size();
  int total = 0;
  for (const auto& b : sd.roots) total += b.multiplicity;
  if (static_cast<std::size_t>(total) != r) {
    throw ValidationError("spectral data does not match the recurrence order");
  }
  const Precision prec = sd.precision;

  // Column (i, l) holds n^l alpha_i^n for rows n = 0..r-1 (0^0 = 1).
  std::vector<std::vector<CBall>> a(r, std::vector<CBall>(r + 1, CBall(prec)));
  std::size_t col = 0;
  for (const auto& root : sd.roots) {
    for (int l = 0; l < root.multiplicity; ++l, ++col) {
      for (std::size_t n = 0; n < r; ++n) {
        CBall entry = pow(root.enclosure, static_cast<long>(n));
        if (l > 0) {
          mpz_class nl;
          mpz_ui_pow_ui(nl.get_mpz_t(), n, static_cast<unsigned long>(l));
          entry = entry * CBall::from_int(nl, prec);
        }
        a[n][col] = entry;
      }
    }
  }
  for (std::size_t n = 0; n < r; ++n) a[n][r] = CBall::from_int(spec.initial[n], prec);

  double max_entry = 0, min_pivot = std::numeric_limits<double>::infinity();
  for (const auto& row : a) {
    for (std::size_t c = 0; c < r; ++c) max_entry = std::max(max_entry, mid_abs(row[c]));
  }
  for (std::size_t k = 0; k < r; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < r; ++i) {
      if (mid_abs(a[i][k]) > mid_abs(a[best][k])) best = i;
    }
    std::swap(a[k], a[best]);
    double piv = mid_abs(a[k][k]);
    min_pivot = std::min(min_pivot, piv);
    if (a[k][k].contains_zero()) {
      double cond = piv > 0 ? max_entry / piv : std::numeric_limits<double>::infinity();
      throw PrecisionError("Binet system too ill-conditioned at " + std::to_string(prec) +
                           " bits (condition estimate " + std::to_string(cond) + ")");
    }
    CBall inv_piv = inv(a[k][k]);
    for (std::size_t i = k + 1; i < r; ++i) {
      CBall factor = a[i][k] * inv_piv;
      for (std::size_t c = k; c <= r; ++c) a[i][c] = a[i][c] - factor * a[k][c];
    }
  }
  std::vector<CBall> x(r, CBall(prec));
  for (std::size_t k = r; k-- > 0;) {
    CBall acc = a[k][r];
    for (std::size_t c = k + 1; c < r; ++c) acc = acc - a[k][c] * x[c];
    x[k] = acc / a[k][k];
  }

  BinetCoefficients out;
  out.spectral = sd;
  out.condition = min_pivot > 0 ? max_entry / min_pivot : 0;
  col = 0;
  for (const auto& root : sd.roots) {
    std::vector<CBall> b;
    for (int l = 0; l < root.multiplicity; ++l) b.push_back(x[col++]);
    out.beta.push_back(std::move(b));
  }
  return out;
}

CBall reconstruct(const BinetCoefficients& coeffs, unsigned long n) {
  CBall sum(coeffs.precision());
  const auto& roots = coeffs.spectral.roots;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    sum = sum + coeffs.f(i, n) * pow(roots[i].enclosure, static_cast<long>(n));
  }
  return sum;
}

GrowthReport growth_constants(const RecurrenceSpec& spec, const BinetCoefficients& coeffs,
                              unsigned long lo, unsigned long hi) {
  if (lo > hi) throw ValidationError("growth window is empty");
  const auto& sd = coeffs.spectral;
  const RootBox& top = sd.dominant();
  const double log_alpha1 = log_abs(top.enclosure);
  const int r = spec.order();

  GrowthReport rep;
  rep.lo = lo;
  rep.hi = hi;
  rep.c4 = std::numeric_limits<double>::infinity();
  double c6_log = -std::numeric_limits<double>::infinity();
  const auto u = terms(spec, hi);
  for (unsigned long n = lo; n <= hi; ++n) {
    for (std::size_t i = 0; i < sd.t(); ++i) {
      const int m = sd.roots[i].multiplicity;
      if (n == 0 && m > 1) continue;  // n^(m-1) vanishes
      CBall fi = coeffs.f(i, n);
      if (fi.contains_zero()) {
        rep.excluded.push_back({i, n});
        continue;
      }
      double v = mid_abs(fi);
      rep.c4 = std::min(rep.c4, v);
      rep.c5 = std::max(rep.c5, v / std::pow(static_cast<double>(n), m - 1));
    }
    if (u[n] == 0 || (n == 0 && r > 1)) continue;
    double l = log_abs(u[n]) - (r - 1) * std::log(static_cast<double>(n)) - n * log_alpha1;
    c6_log = std::max(c6_log, l);
  }
  if (rep.c4 == std::numeric_limits<double>::infinity()) rep.c4 = 0;
  rep.c6 = std::exp(c6_log);
  return rep;
}

}  // namespace spartlab
