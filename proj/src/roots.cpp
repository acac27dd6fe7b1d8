#include "spartlab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spartlab/errors.hpp"

namespace spartlab {

namespace {

// Plain (uncertified) complex numbers for the approximation phase.
struct Cx {
  Real re, im;
  explicit Cx(Precision p) : re(p), im(p) {}
};

Cx add(const Cx& a, const Cx& b) {
  Cx r(a.re.precision());
  mpfr_add(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return r;
}

Cx sub(const Cx& a, const Cx& b) {
  Cx r(a.re.precision());
  mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return r;
}

Cx mul(const Cx& a, const Cx& b) {
  Precision p = a.re.precision();
  Cx r(p);
  Real t(p);
  mpfr_mul(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(r.re.get(), r.re.get(), t.get(), MPFR_RNDN);
  mpfr_mul(r.im.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), r.im.get(), t.get(), MPFR_RNDN);
  return r;
}

bool is_zero(const Cx& a) { return mpfr_zero_p(a.re.get()) && mpfr_zero_p(a.im.get()); }

Cx div(const Cx& a, const Cx& b) {
  Precision p = a.re.precision();
  Real n(p), t(p);
  mpfr_sqr(n.get(), b.re.get(), MPFR_RNDN);
  mpfr_fma(n.get(), b.im.get(), b.im.get(), n.get(), MPFR_RNDN);
  Cx conj_b(p);
  mpfr_set(conj_b.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_neg(conj_b.im.get(), b.im.get(), MPFR_RNDN);
  Cx r = mul(a, conj_b);
  mpfr_div(r.re.get(), r.re.get(), n.get(), MPFR_RNDN);
  mpfr_div(r.im.get(), r.im.get(), n.get(), MPFR_RNDN);
  return r;
}

Real cabs(const Cx& a) {
  Real r(a.re.precision());
  mpfr_hypot(r.get(), a.re.get(), a.im.get(), MPFR_RNDN);
  return r;
}

// p(z) and p'(z) by Horner.
std::pair<Cx, Cx> eval_with_derivative(const std::vector<mpz_class>& c, const Cx& z) {
  Precision p = z.re.precision();
  Cx val(p), der(p);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    der = add(mul(der, z), val);
    val = mul(val, z);
    mpfr_add_z(val.re.get(), val.re.get(), it->get_mpz_t(), MPFR_RNDN);
  }
  return {val, der};
}

// Aberth-Ehrlich simultaneous iteration on a squarefree polynomial.
std::vector<Cx> aberth(const IntegerPolynomial& g, Precision prec) {
  const auto& c = g.coefficients();
  const int n = g.degree();
  // Initial radius: max_i |c_i / c_n|^(1/(n-i)) bounds roots up to a factor 2.
  double radius = 0;
  const double lead = std::fabs(mpz_get_d(c.back().get_mpz_t()));
  for (int i = 0; i < n; ++i) {
    double ci = std::fabs(mpz_get_d(c[i].get_mpz_t()));
    if (ci == 0) continue;
    radius = std::max(radius, std::pow(ci / lead, 1.0 / (n - i)));
  }
  if (radius == 0) radius = 1;
  std::vector<Cx> z;
  for (int k = 0; k < n; ++k) {
    double angle = 2 * M_PI * k / n + 0.4;
    Cx v(prec);
    mpfr_set_d(v.re.get(), radius * std::cos(angle), MPFR_RNDN);
    mpfr_set_d(v.im.get(), radius * std::sin(angle), MPFR_RNDN);
    z.push_back(std::move(v));
  }

  Real tol(prec);
  mpfr_set_ui_2exp(tol.get(), 1, -(static_cast<long>(prec) - 6), MPFR_RNDN);
  const int max_iter = 60 * n + 4 * static_cast<int>(prec);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool converged = true;
    for (int i = 0; i < n; ++i) {
      auto [val, der] = eval_with_derivative(c, z[i]);
      if (is_zero(val)) continue;
      if (is_zero(der)) {
        mpfr_nextabove(z[i].re.get());
        converged = false;
        continue;
      }
      Cx ratio = div(val, der);
      Cx sum(prec);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        Cx diff = sub(z[i], z[j]);
        if (is_zero(diff)) continue;
        Cx one(prec);
        mpfr_set_ui(one.re.get(), 1, MPFR_RNDN);
        sum = add(sum, div(one, diff));
      }
      Cx one(prec);
      mpfr_set_ui(one.re.get(), 1, MPFR_RNDN);
      Cx den = sub(one, mul(ratio, sum));
      Cx step = is_zero(den) ? ratio : div(ratio, den);
      z[i] = sub(z[i], step);
      Real scale = cabs(z[i]);
      if (mpfr_cmp_ui(scale.get(), 1) < 0) mpfr_set_ui(scale.get(), 1, MPFR_RNDN);
      Real s = cabs(step);
      mpfr_div(s.get(), s.get(), scale.get(), MPFR_RNDN);
      if (mpfr_greater_p(s.get(), tol.get())) converged = false;
    }
    if (converged) return z;
  }
  return z;  // certification decides whether this is good enough
}

struct Candidate {
  Cx z;
  std::size_t factor_index;
  int multiplicity;
  bool real;
  std::optional<std::size_t> conj;
};

// Snap the `real_count` approximations closest to the axis onto it and
// symmetrize the rest into exact conjugate pairs. False if pairing fails.
bool snap(std::vector<Cx>& z, int real_count, std::vector<bool>& is_real,
          std::vector<std::optional<std::size_t>>& conj) {
  const std::size_t n = z.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mpfr_cmpabs(z[a].im.get(), z[b].im.get()) < 0;
  });
  is_real.assign(n, false);
  conj.assign(n, std::nullopt);
  for (int i = 0; i < real_count; ++i) {
    is_real[order[i]] = true;
    mpfr_set_zero(z[order[i]].im.get(), 1);
  }
  std::vector<std::size_t> upper, lower;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_real[i]) continue;
    (mpfr_sgn(z[i].im.get()) > 0 ? upper : lower).push_back(i);
  }
  if (upper.size() != lower.size()) return false;
  std::vector<bool> used(lower.size(), false);
  for (std::size_t u : upper) {
    std::size_t best = lower.size();
    Real best_dist(z[u].re.precision());
    for (std::size_t k = 0; k < lower.size(); ++k) {
      if (used[k]) continue;
      Cx mirrored(z[u].re.precision());
      mpfr_set(mirrored.re.get(), z[lower[k]].re.get(), MPFR_RNDN);
      mpfr_neg(mirrored.im.get(), z[lower[k]].im.get(), MPFR_RNDN);
      Real d = cabs(sub(z[u], mirrored));
      if (best == lower.size() || mpfr_less_p(d.get(), best_dist.get())) {
        best = k;
        best_dist = d;
      }
    }
    used[best] = true;
    std::size_t l = lower[best];
    // Average the pair and mirror it exactly.
    mpfr_add(z[u].re.get(), z[u].re.get(), z[l].re.get(), MPFR_RNDN);
    mpfr_div_2ui(z[u].re.get(), z[u].re.get(), 1, MPFR_RNDN);
    mpfr_sub(z[u].im.get(), z[u].im.get(), z[l].im.get(), MPFR_RNDN);
    mpfr_div_2ui(z[u].im.get(), z[u].im.get(), 1, MPFR_RNDN);
    mpfr_set(z[l].re.get(), z[u].re.get(), MPFR_RNDN);
    mpfr_neg(z[l].im.get(), z[u].im.get(), MPFR_RNDN);
    conj[u] = l;
    conj[l] = u;
  }
  return true;
}

CBall exact_center(const Cx& z) {
  Real zero(kRadiusPrecision);
  return CBall(z.re, z.im, zero);
}

// Inclusion radii n |W_i| with W_i = g(z_i) / (lc prod_{j != i} (z_i - z_j)):
// the union of these disks contains all roots and every connected component
// holds as many roots as disks, so disjoint disks hold exactly one root each.
std::vector<Real> inclusion_radii(const IntegerPolynomial& g, const std::vector<Cx>& z,
                                  Precision prec) {
  const std::size_t n = z.size();
  std::vector<Real> radii;
  for (std::size_t i = 0; i < n; ++i) {
    CBall zi = exact_center(z[i]);
    CBall num = g.eval(zi);
    CBall den = CBall::from_int(g.leading(), prec);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) den = den * (zi - exact_center(z[j]));
    }
    CBall w = num / den;
    Real r = w.abs_upper();
    mpfr_mul_ui(r.get(), r.get(), n, MPFR_RNDU);
    radii.push_back(std::move(r));
  }
  return radii;
}

std::optional<std::vector<RootBox>> attempt(const IntegerPolynomial& p,
                                            const std::vector<SquarefreeFactor>& factors,
                                            Precision prec) {
  std::vector<RootBox> boxes;
  for (std::size_t fi = 0; fi < factors.size(); ++fi) {
    const auto& g = factors[fi].factor;
    const int mult = factors[fi].multiplicity;
    if (g.degree() == 1) {
      mpq_class root(-g.coeff(0), g.coeff(1));
      root.canonicalize();
      boxes.push_back({CBall::from_rational(root, prec), mult, true, std::nullopt, fi});
      continue;
    }
    std::vector<Cx> z = aberth(g, prec);
    std::vector<bool> is_real;
    std::vector<std::optional<std::size_t>> conj;
    if (!snap(z, count_real_roots(g), is_real, conj)) return std::nullopt;
    std::vector<Real> radii;
    try {
      radii = inclusion_radii(g, z, prec);
    } catch (const PrecisionError&) {
      return std::nullopt;  // coincident approximations
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (conj[i]) {
        std::size_t j = *conj[i];
        if (mpfr_less_p(radii[i].get(), radii[j].get())) radii[i] = radii[j];
      }
    }
    const std::size_t base = boxes.size();
    for (std::size_t i = 0; i < z.size(); ++i) {
      RootBox b{CBall(z[i].re, z[i].im, radii[i]), mult, is_real[i], std::nullopt, fi};
      if (conj[i]) b.conjugate = base + *conj[i];
      boxes.push_back(std::move(b));
    }
  }

  // Tolerance and global disjointness (across squarefree factors too).
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    Real bound = boxes[i].enclosure.abs_upper();
    if (mpfr_cmp_ui(bound.get(), 1) < 0) mpfr_set_ui(bound.get(), 1, MPFR_RNDN);
    mpfr_mul_2si(bound.get(), bound.get(), -static_cast<long>(prec / 2), MPFR_RNDD);
    if (mpfr_greater_p(boxes[i].enclosure.rad().get(), bound.get())) return std::nullopt;
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      if (boxes[i].enclosure.overlaps(boxes[j].enclosure)) return std::nullopt;
    }
  }
  (void)p;
  return boxes;
}

// Sort key comparison on exact centers: -|z|, -re, -im.
bool box_before(const RootBox& a, const RootBox& b) {
  Precision prec = std::max(a.enclosure.precision(), b.enclosure.precision());
  Real ma(2 * prec + 2), mb(2 * prec + 2);
  mpfr_sqr(ma.get(), a.enclosure.re().get(), MPFR_RNDN);
  mpfr_fma(ma.get(), a.enclosure.im().get(), a.enclosure.im().get(), ma.get(), MPFR_RNDN);
  mpfr_sqr(mb.get(), b.enclosure.re().get(), MPFR_RNDN);
  mpfr_fma(mb.get(), b.enclosure.im().get(), b.enclosure.im().get(), mb.get(), MPFR_RNDN);
  int c = mpfr_cmp(ma.get(), mb.get());
  if (c != 0) return c > 0;
  c = mpfr_cmp(a.enclosure.re().get(), b.enclosure.re().get());
  if (c != 0) return c > 0;
  return mpfr_cmp(a.enclosure.im().get(), b.enclosure.im().get()) > 0;
}

}  // namespace

std::vector<RootBox> isolate_roots(const IntegerPolynomial& p, Precision prec,
                                   Precision max_prec) {
  if (p.degree() < 1) throw ValidationError("root isolation needs degree >= 1");
  if (prec < 32) prec = 32;
  const auto factors = squarefree_decomposition(p);
  for (Precision cur = prec; cur <= std::max(prec, max_prec); cur *= 2) {
    auto boxes = attempt(p, factors, cur);
    if (!boxes) continue;
    std::vector<std::size_t> order(boxes->size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return box_before((*boxes)[a], (*boxes)[b]);
    });
    std::vector<std::size_t> position(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    std::vector<RootBox> sorted;
    sorted.reserve(order.size());
    for (std::size_t idx : order) {
      RootBox b = (*boxes)[idx];
      if (b.conjugate) b.conjugate = position[*b.conjugate];
      sorted.push_back(std::move(b));
    }
    return sorted;
  }
  throw PrecisionError("could not certify root enclosures of " + p.to_string() + " at " +
                       std::to_string(max_prec) + " bits");
}

}  // namespace spartlab
