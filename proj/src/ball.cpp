#include "spartlab/ball.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>
#include <vector>

#include "spartlab/errors.hpp"

namespace spartlab {

// ---------------------------------------------------------------- Real

Real::Real(Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

Real::Real(double value, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

double Real::to_double(mpfr_rnd_t rnd) const { return mpfr_get_d(value_, rnd); }

std::string Real::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

namespace {

Real zero_radius() { return Real(kRadiusPrecision); }

// One ulp of `mid`: an upper bound on the error of a round-to-nearest result.
Real ulp_of(const Real& mid) {
  Real u(kRadiusPrecision);
  if (mpfr_zero_p(mid.get()) || !mpfr_number_p(mid.get())) return u;
  mpfr_set_ui_2exp(u.get(), 1, mpfr_get_exp(mid.get()) - mid.precision(),
                   MPFR_RNDU);
  return u;
}

void add_up(Real& acc, const Real& x) {
  mpfr_add(acc.get(), acc.get(), x.get(), MPFR_RNDU);
}

void account_rounding(Real& rad, const Real& mid, int ternary) {
  if (ternary != 0) add_up(rad, ulp_of(mid));
}

Real abs_up(const Real& x) {
  Real r(kRadiusPrecision);
  mpfr_abs(r.get(), x.get(), MPFR_RNDU);
  return r;
}

Real abs_down(const Real& x) {
  Real r(kRadiusPrecision);
  mpfr_abs(r.get(), x.get(), MPFR_RNDD);
  return r;
}

Real mul_up(const Real& a, const Real& b) {
  Real r(kRadiusPrecision);
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDU);
  return r;
}

Real hypot_rnd(const Real& a, const Real& b, mpfr_rnd_t rnd) {
  Real r(kRadiusPrecision);
  mpfr_hypot(r.get(), a.get(), b.get(), rnd);
  return r;
}

// 2^-p scaled by k, rounded up.
Real unit_roundoff(Precision p, unsigned long k) {
  Real r(kRadiusPrecision);
  mpfr_set_ui_2exp(r.get(), k, -static_cast<long>(p), MPFR_RNDU);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Ball

Ball::Ball(Precision prec) : mid_(prec), rad_(zero_radius()) {}

Ball Ball::from_int(const mpz_class& value, Precision prec) {
  Ball b(prec);
  int t = mpfr_set_z(b.mid_.get(), value.get_mpz_t(), MPFR_RNDN);
  account_rounding(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::from_int(long value, Precision prec) {
  Ball b(prec);
  int t = mpfr_set_si(b.mid_.get(), value, MPFR_RNDN);
  account_rounding(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::from_rational(const mpq_class& value, Precision prec) {
  Ball b(prec);
  int t = mpfr_set_q(b.mid_.get(), value.get_mpq_t(), MPFR_RNDN);
  account_rounding(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::from_double(double value, Precision prec) {
  Ball b(prec);
  int t = mpfr_set_d(b.mid_.get(), value, MPFR_RNDN);
  account_rounding(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::from_bounds(const Real& lo, const Real& hi, Precision prec) {
  Ball b(prec);
  mpfr_add(b.mid_.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(b.mid_.get(), b.mid_.get(), 1, MPFR_RNDN);
  Real up(kRadiusPrecision), down(kRadiusPrecision);
  mpfr_sub(up.get(), hi.get(), b.mid_.get(), MPFR_RNDU);
  mpfr_sub(down.get(), b.mid_.get(), lo.get(), MPFR_RNDU);
  mpfr_max(b.rad_.get(), up.get(), down.get(), MPFR_RNDU);
  if (mpfr_sgn(b.rad_.get()) < 0) mpfr_set_zero(b.rad_.get(), 1);
  return b;
}

Ball Ball::pi(Precision prec) {
  Real lo(prec), hi(prec);
  mpfr_const_pi(lo.get(), MPFR_RNDD);
  mpfr_const_pi(hi.get(), MPFR_RNDU);
  return from_bounds(lo, hi, prec);
}

Ball Ball::log2(Precision prec) {
  Real lo(prec), hi(prec);
  mpfr_const_log2(lo.get(), MPFR_RNDD);
  mpfr_const_log2(hi.get(), MPFR_RNDU);
  return from_bounds(lo, hi, prec);
}

Real Ball::lower() const {
  Real r(precision());
  mpfr_sub(r.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return r;
}

Real Ball::upper() const {
  Real r(precision());
  mpfr_add(r.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return r;
}

double Ball::lower_double() const { return lower().to_double(MPFR_RNDD); }
double Ball::upper_double() const { return upper().to_double(MPFR_RNDU); }

bool Ball::contains_zero() const {
  return mpfr_sgn(lower().get()) <= 0 && mpfr_sgn(upper().get()) >= 0;
}

bool Ball::is_positive() const { return mpfr_sgn(lower().get()) > 0; }
bool Ball::is_negative() const { return mpfr_sgn(upper().get()) < 0; }

bool Ball::contains(const Real& x) const {
  return mpfr_lessequal_p(lower().get(), x.get()) &&
         mpfr_lessequal_p(x.get(), upper().get());
}

bool Ball::contains(double x) const { return contains(Real(x, 64)); }

bool Ball::overlaps(const Ball& other) const {
  return mpfr_lessequal_p(lower().get(), other.upper().get()) &&
         mpfr_lessequal_p(other.lower().get(), upper().get());
}

Ball& Ball::widen(const Real& err) {
  Real e = abs_up(err);
  add_up(rad_, e);
  return *this;
}

Ball& Ball::widen(double err) { return widen(Real(err, 64)); }

Ball Ball::operator-() const {
  Ball r = *this;
  mpfr_neg(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
  return r;
}

Ball operator+(const Ball& a, const Ball& b) {
  Ball r(std::max(a.precision(), b.precision()));
  int t = mpfr_add(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  mpfr_add(r.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
  account_rounding(r.rad_, r.mid_, t);
  return r;
}

Ball operator-(const Ball& a, const Ball& b) { return a + (-b); }

Ball operator*(const Ball& a, const Ball& b) {
  Ball r(std::max(a.precision(), b.precision()));
  int t = mpfr_mul(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  Real rad = mul_up(abs_up(a.mid_), b.rad_);
  add_up(rad, mul_up(abs_up(b.mid_), a.rad_));
  add_up(rad, mul_up(a.rad_, b.rad_));
  r.rad_ = std::move(rad);
  account_rounding(r.rad_, r.mid_, t);
  return r;
}

Ball operator/(const Ball& a, const Ball& b) {
  if (b.contains_zero()) {
    throw PrecisionError("division by an enclosure that contains zero");
  }
  Ball inv(b.precision());
  int t = mpfr_ui_div(inv.mid_.get(), 1, b.mid_.get(), MPFR_RNDN);
  // |1/x - 1/m| <= r / (|m| (|m| - r)) for |x - m| <= r < |m|.
  Real m = abs_down(b.mid_);
  Real gap(kRadiusPrecision);
  mpfr_sub(gap.get(), m.get(), b.rad_.get(), MPFR_RNDD);
  if (mpfr_sgn(gap.get()) <= 0) {
    throw PrecisionError("division by an enclosure that nearly contains zero");
  }
  Real den(kRadiusPrecision);
  mpfr_mul(den.get(), m.get(), gap.get(), MPFR_RNDD);
  mpfr_div(inv.rad_.get(), b.rad_.get(), den.get(), MPFR_RNDU);
  account_rounding(inv.rad_, inv.mid_, t);
  return a * inv;
}

std::string Ball::to_string(int digits) const {
  return mid_.to_string(digits) + " +/- " + rad_.to_string(3);
}

namespace {

template <typename F>
Ball monotone_increasing(const Ball& x, F&& f) {
  Precision p = x.precision();
  Real lo = x.lower(), hi = x.upper();
  Real flo(p), fhi(p);
  f(flo.get(), lo.get(), MPFR_RNDD);
  f(fhi.get(), hi.get(), MPFR_RNDU);
  return Ball::from_bounds(flo, fhi, p);
}

}  // namespace

Ball abs(const Ball& x) {
  if (!x.contains_zero()) return x.is_negative() ? -x : x;
  Precision p = x.precision();
  Real lo = x.lower(), hi = x.upper();
  mpfr_abs(lo.get(), lo.get(), MPFR_RNDU);
  Real top(p);
  mpfr_max(top.get(), lo.get(), hi.get(), MPFR_RNDU);
  return Ball::from_bounds(Real(p), top, p);
}

Ball sqrt(const Ball& x) {
  Precision p = x.precision();
  Real lo = x.lower(), hi = x.upper();
  if (mpfr_sgn(hi.get()) < 0) throw PrecisionError("sqrt of a negative enclosure");
  if (mpfr_sgn(lo.get()) < 0) mpfr_set_zero(lo.get(), 1);
  Real slo(p), shi(p);
  mpfr_sqrt(slo.get(), lo.get(), MPFR_RNDD);
  mpfr_sqrt(shi.get(), hi.get(), MPFR_RNDU);
  return Ball::from_bounds(slo, shi, p);
}

Ball log(const Ball& x) {
  if (!x.is_positive()) throw PrecisionError("log of an enclosure that reaches 0");
  return monotone_increasing(x, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) {
    mpfr_log(r, a, rnd);
  });
}

Ball exp(const Ball& x) {
  return monotone_increasing(x, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) {
    mpfr_exp(r, a, rnd);
  });
}

Ball pow(const Ball& x, long n) {
  if (n < 0) return Ball::from_int(1L, x.precision()) / pow(x, -n);
  Ball result = Ball::from_int(1L, x.precision());
  Ball base = x;
  auto e = static_cast<unsigned long>(n);
  while (e != 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

Ball max(const Ball& a, const Ball& b) {
  Precision p = std::max(a.precision(), b.precision());
  Real lo(p), hi(p);
  mpfr_max(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
  return Ball::from_bounds(lo, hi, p);
}

Ball log_of(const mpz_class& n, Precision prec) {
  if (n == 0) throw ValidationError("log of zero");
  mpz_class m = abs(n);
  Real lo(prec), hi(prec);
  mpfr_set_z(lo.get(), m.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi.get(), m.get_mpz_t(), MPFR_RNDU);
  mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
  return Ball::from_bounds(lo, hi, prec);
}

bool certainly_less(const Ball& a, const Ball& b) {
  return mpfr_less_p(a.upper().get(), b.lower().get());
}

// ---------------------------------------------------------------- CBall

CBall::CBall(Precision prec) : re_(prec), im_(prec), rad_(zero_radius()) {}

CBall::CBall(const Ball& real)
    : re_(real.mid()), im_(real.precision()), rad_(real.rad()) {}

CBall::CBall(const Real& re, const Real& im, const Real& rad)
    : re_(std::max(re.precision(), im.precision())),
      im_(std::max(re.precision(), im.precision())),
      rad_(zero_radius()) {
  mpfr_set(re_.get(), re.get(), MPFR_RNDN);
  mpfr_set(im_.get(), im.get(), MPFR_RNDN);
  Real r = abs_up(rad);
  rad_ = std::move(r);
}

CBall CBall::from_int(const mpz_class& value, Precision prec) {
  return CBall(Ball::from_int(value, prec));
}

CBall CBall::from_rational(const mpq_class& value, Precision prec) {
  return CBall(Ball::from_rational(value, prec));
}

Ball CBall::real() const {
  Ball b(precision());
  b.mid_ = re_;
  b.rad_ = rad_;
  return b;
}

Ball CBall::imag() const {
  Ball b(precision());
  b.mid_ = im_;
  b.rad_ = rad_;
  return b;
}

Ball CBall::abs() const {
  Ball b(precision());
  int t = mpfr_hypot(b.mid_.get(), re_.get(), im_.get(), MPFR_RNDN);
  b.rad_ = rad_;
  account_rounding(b.rad_, b.mid_, t);
  return b;
}

CBall CBall::conj() const {
  CBall r = *this;
  mpfr_neg(r.im_.get(), r.im_.get(), MPFR_RNDN);
  return r;
}

Real CBall::abs_upper() const {
  Real h = hypot_rnd(re_, im_, MPFR_RNDU);
  add_up(h, rad_);
  return h;
}

Real CBall::abs_lower() const {
  Real h = hypot_rnd(re_, im_, MPFR_RNDD);
  mpfr_sub(h.get(), h.get(), rad_.get(), MPFR_RNDD);
  if (mpfr_sgn(h.get()) < 0) mpfr_set_zero(h.get(), 1);
  return h;
}

bool CBall::contains_zero() const { return mpfr_zero_p(abs_lower().get()) != 0; }

bool CBall::overlaps(const CBall& other) const {
  Precision p = std::max(precision(), other.precision());
  Real dre(p), dim(p);
  mpfr_sub(dre.get(), re_.get(), other.re_.get(), MPFR_RNDN);
  mpfr_sub(dim.get(), im_.get(), other.im_.get(), MPFR_RNDN);
  Real are = abs_down(dre), aim = abs_down(dim);
  mpfr_sub(are.get(), are.get(), ulp_of(dre).get(), MPFR_RNDD);
  mpfr_sub(aim.get(), aim.get(), ulp_of(dim).get(), MPFR_RNDD);
  if (mpfr_sgn(are.get()) < 0) mpfr_set_zero(are.get(), 1);
  if (mpfr_sgn(aim.get()) < 0) mpfr_set_zero(aim.get(), 1);
  Real dist = hypot_rnd(are, aim, MPFR_RNDD);
  Real reach(kRadiusPrecision);
  mpfr_add(reach.get(), rad_.get(), other.rad_.get(), MPFR_RNDU);
  return mpfr_lessequal_p(dist.get(), reach.get());
}

CBall& CBall::widen(const Real& err) {
  add_up(rad_, abs_up(err));
  return *this;
}

CBall CBall::operator-() const {
  CBall r = *this;
  mpfr_neg(r.re_.get(), r.re_.get(), MPFR_RNDN);
  mpfr_neg(r.im_.get(), r.im_.get(), MPFR_RNDN);
  return r;
}

CBall operator+(const CBall& a, const CBall& b) {
  CBall r(std::max(a.precision(), b.precision()));
  int t1 = mpfr_add(r.re_.get(), a.re_.get(), b.re_.get(), MPFR_RNDN);
  int t2 = mpfr_add(r.im_.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  mpfr_add(r.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
  account_rounding(r.rad_, r.re_, t1);
  account_rounding(r.rad_, r.im_, t2);
  return r;
}

CBall operator-(const CBall& a, const CBall& b) { return a + (-b); }

CBall operator*(const CBall& a, const CBall& b) {
  Precision p = std::max(a.precision(), b.precision());
  CBall r(p);
  Real ac(p), bd(p), ad(p), bc(p);
  mpfr_mul(ac.get(), a.re_.get(), b.re_.get(), MPFR_RNDN);
  mpfr_mul(bd.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  mpfr_mul(ad.get(), a.re_.get(), b.im_.get(), MPFR_RNDN);
  mpfr_mul(bc.get(), a.im_.get(), b.re_.get(), MPFR_RNDN);
  mpfr_sub(r.re_.get(), ac.get(), bd.get(), MPFR_RNDN);
  mpfr_add(r.im_.get(), ad.get(), bc.get(), MPFR_RNDN);

  // Midpoint rounding: each component is off by at most
  // 3u (|a_re|+|a_im|)(|b_re|+|b_im|); 8u covers both components.
  Real sa = abs_up(a.re_), sb = abs_up(b.re_);
  add_up(sa, abs_up(a.im_));
  add_up(sb, abs_up(b.im_));
  Real err = mul_up(mul_up(sa, sb), unit_roundoff(p, 8));

  Real rad = mul_up(hypot_rnd(a.re_, a.im_, MPFR_RNDU), b.rad_);
  add_up(rad, mul_up(hypot_rnd(b.re_, b.im_, MPFR_RNDU), a.rad_));
  add_up(rad, mul_up(a.rad_, b.rad_));
  add_up(rad, err);
  r.rad_ = std::move(rad);
  return r;
}

CBall inv(const CBall& z) {
  Precision p = z.precision();
  Real m = hypot_rnd(z.re(), z.im(), MPFR_RNDD);
  if (!mpfr_greater_p(m.get(), z.rad().get())) {
    throw PrecisionError("inverse of a complex enclosure that contains zero");
  }
  Real n(p), re(p), im(p);
  mpfr_sqr(n.get(), z.re().get(), MPFR_RNDN);
  mpfr_fma(n.get(), z.im().get(), z.im().get(), n.get(), MPFR_RNDN);
  mpfr_div(re.get(), z.re().get(), n.get(), MPFR_RNDN);
  mpfr_div(im.get(), z.im().get(), n.get(), MPFR_RNDN);
  mpfr_neg(im.get(), im.get(), MPFR_RNDN);

  Real gap(kRadiusPrecision);
  mpfr_sub(gap.get(), m.get(), z.rad().get(), MPFR_RNDD);
  Real den(kRadiusPrecision);
  mpfr_mul(den.get(), m.get(), gap.get(), MPFR_RNDD);
  Real rad(kRadiusPrecision);
  mpfr_div(rad.get(), z.rad().get(), den.get(), MPFR_RNDU);
  // Midpoint rounding: relative error below 6u per component.
  Real err(kRadiusPrecision);
  mpfr_div(err.get(), unit_roundoff(p, 12).get(), m.get(), MPFR_RNDU);
  add_up(rad, err);
  return CBall(re, im, rad);
}

CBall operator/(const CBall& a, const CBall& b) { return a * inv(b); }

CBall pow(const CBall& z, long n) {
  if (n < 0) return inv(pow(z, -n));
  CBall result = CBall::from_int(1, z.precision());
  CBall base = z;
  auto e = static_cast<unsigned long>(n);
  while (e != 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

std::string CBall::to_string(int digits) const {
  std::string s = re_.to_string(digits);
  if (!mpfr_zero_p(im_.get())) {
    s += mpfr_sgn(im_.get()) < 0 ? " - " : " + ";
    Real full(im_.precision());
    mpfr_abs(full.get(), im_.get(), MPFR_RNDN);
    s += full.to_string(digits) + "i";
  }
  return s + " +/- " + rad_.to_string(3);
}

}  // namespace spartlab
