#pragma once

// Midpoint-radius ("ball") arithmetic over MPFR. Every operation returns an
// enclosure that contains the exact result for all inputs inside the operand
// enclosures: midpoint rounding errors are folded into the radius, and radii
// are always rounded upward.

#include <mpfr.h>
#include <gmpxx.h>

#include <string>

namespace spartlab {

using Precision = mpfr_prec_t;

/// Radii are carried at this fixed precision (always rounded up).
inline constexpr Precision kRadiusPrecision = 64;

/// Owning wrapper around an mpfr_t.
class Real {
 public:
  explicit Real(Precision prec = 128);
  Real(double value, Precision prec);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  Precision precision() const noexcept { return mpfr_get_prec(value_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const;
  /// Scientific notation with `digits` significant decimal digits.
  std::string to_string(int digits = 20) const;

 private:
  mpfr_t value_;
};

class Ball {
 public:
  explicit Ball(Precision prec = 128);  // exact zero

  static Ball from_int(const mpz_class& value, Precision prec);
  static Ball from_int(long value, Precision prec);
  static Ball from_rational(const mpq_class& value, Precision prec);
  static Ball from_double(double value, Precision prec);
  /// Ball covering [lo, hi].
  static Ball from_bounds(const Real& lo, const Real& hi, Precision prec);
  static Ball pi(Precision prec);
  static Ball log2(Precision prec);

  const Real& mid() const noexcept { return mid_; }
  const Real& rad() const noexcept { return rad_; }
  Precision precision() const noexcept { return mid_.precision(); }

  Real lower() const;  // mid - rad, rounded down
  Real upper() const;  // mid + rad, rounded up
  double lower_double() const;
  double upper_double() const;
  double mid_double() const { return mid_.to_double(); }
  double rad_double() const { return rad_.to_double(MPFR_RNDU); }

  bool contains_zero() const;
  bool is_positive() const;  // lower > 0
  bool is_negative() const;  // upper < 0
  bool contains(const Real& x) const;
  bool contains(double x) const;
  bool overlaps(const Ball& other) const;

  /// Widen the radius by a non-negative error term.
  Ball& widen(const Real& err);
  Ball& widen(double err);

  Ball operator-() const;
  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator*(const Ball& a, const Ball& b);
  /// Throws PrecisionError when the divisor contains zero.
  friend Ball operator/(const Ball& a, const Ball& b);

  std::string to_string(int digits = 20) const;

 private:
  friend class CBall;
  Real mid_;
  Real rad_;
};

Ball abs(const Ball& x);
Ball sqrt(const Ball& x);  // requires x >= 0 somewhere; clamps negative part
Ball log(const Ball& x);   // requires x > 0
Ball exp(const Ball& x);
Ball pow(const Ball& x, long n);
Ball max(const Ball& a, const Ball& b);
Ball log_of(const mpz_class& n, Precision prec);  // log|n|, n != 0
/// a < b holds for every pair of points in the two enclosures.
bool certainly_less(const Ball& a, const Ball& b);

/// Complex disk: midpoint (re, im) with a single radius.
class CBall {
 public:
  explicit CBall(Precision prec = 128);
  CBall(const Ball& real);  // NOLINT: real balls embed implicitly
  CBall(const Real& re, const Real& im, const Real& rad);

  static CBall from_int(const mpz_class& value, Precision prec);
  static CBall from_rational(const mpq_class& value, Precision prec);

  const Real& re() const noexcept { return re_; }
  const Real& im() const noexcept { return im_; }
  const Real& rad() const noexcept { return rad_; }
  Precision precision() const noexcept { return re_.precision(); }

  Ball real() const;
  Ball imag() const;
  Ball abs() const;
  CBall conj() const;

  bool contains_zero() const;
  bool overlaps(const CBall& other) const;
  /// Upper / lower bound on |z| over the disk (lower bound may be 0).
  Real abs_upper() const;
  Real abs_lower() const;

  CBall& widen(const Real& err);

  CBall operator-() const;
  friend CBall operator+(const CBall& a, const CBall& b);
  friend CBall operator-(const CBall& a, const CBall& b);
  friend CBall operator*(const CBall& a, const CBall& b);
  friend CBall operator/(const CBall& a, const CBall& b);

  std::string to_string(int digits = 20) const;

 private:
  Real re_;
  Real im_;
  Real rad_;
};

CBall inv(const CBall& z);
CBall pow(const CBall& z, long n);

}  // namespace spartlab
