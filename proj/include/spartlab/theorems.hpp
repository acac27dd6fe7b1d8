#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "spartlab/ksum.hpp"
#include "spartlab/recurrence.hpp"
#include "spartlab/sint.hpp"

namespace spartlab {

// ------------------------------------------------------------ hypotheses

struct HypothesisCheck {
  std::string name;
  bool passed = false;
};

/// Standing hypotheses (t >= 2, dominant root, non-degenerate) and the extra
/// ones needed for the exponent-gap theorem (alpha_1 > 1, alpha_1 not in Z).
std::vector<HypothesisCheck> growth_hypotheses(const SpectralData& sd);
std::vector<HypothesisCheck> gap_hypotheses(const SpectralData& sd);

// ------------------------------------------------------- Newton polygons

struct NewtonSegment {
  mpq_class slope;
  int length = 0;
};

struct NewtonPolygonData {
  mpz_class prime;
  std::vector<std::pair<int, unsigned long>> vertices;  // (i, v_p(c_i))
  std::vector<NewtonSegment> segments;                  // non-decreasing slopes
  /// Root valuations lambda = -slope with multiplicities; |alpha|_p = p^-lambda.
  std::vector<std::pair<mpq_class, int>> valuations;
  int zero_roots = 0;  // roots at 0 (infinite valuation)
};

NewtonPolygonData newton_polygon(const IntegerPolynomial& p, const mpz_class& prime);

struct DeltaReport {
  double delta = 0;
  bool exactly_zero = false;
  struct PerPrime {
    mpz_class prime;
    mpq_class min_valuation;  // -log_p max_i |alpha_i|_p
  };
  std::vector<PerPrime> primes;
  double log_max_modulus = 0;
  mpz_class gcd_value;  // gcd(p_1 ... p_s, a_1, ..., a_r)
  bool gcd_condition = false;
  bool consistent = false;  // delta == 0 exactly when the gcd condition holds
};

DeltaReport delta(const RecurrenceSpec& spec, const PrimeSet& primes, Precision prec = 128);

// ------------------------------------------------------- exponent series

struct SPartSeriesRecord {
  unsigned long rank = 0;
  mpz_class value, spart, cofactor;
  double exponent = 0;  // log [v]_S / log v
  IndexTuple witness;
};

std::vector<SPartSeriesRecord> exponent_series(const RecurrenceSpec& spec, unsigned k,
                                               const PrimeSet& primes, IndexWindow window,
                                               KSumMode mode);

/// j,value,spart,cofactor,exponent,witness
std::string series_csv(const std::vector<SPartSeriesRecord>& series);

// ------------------------------------------------------ exponent trend

enum class TrendVerdict { kConsistent, kInconsistent, kInconclusive };
const char* to_string(TrendVerdict v);

struct BandMax {
  unsigned long band = 0;  // values in [2^band, 2^(band+1))
  double max_exponent = 0;
  std::size_t count = 0;
};

struct Thm1Report {
  std::vector<BandMax> bands;
  double global_max = 0, tail_max = 0, first_quartile_max = 0, last_quartile_max = 0;
  TrendVerdict verdict = TrendVerdict::kInconclusive;
};

inline constexpr std::size_t kMinBands = 8;

/// Banded-maximum decay check (a consistency check, not a proof).
Thm1Report verify_thm1(const std::vector<SPartSeriesRecord>& series);

/// Series whose band maxima increase; verify_thm1 must call it inconsistent.
std::vector<SPartSeriesRecord> adversarial_series();

// -------------------------------------------------------- exponent gap

struct Thm2Report {
  unsigned long j0 = 0;
  std::size_t tail_size = 0;
  double tail_max = 0;
  double c_hat = 0;  // 1 - tail_max
  bool positive = false;
  unsigned long c2_proxy = 0;  // least j with e_i <= 1 - c_hat for all i >= j
  std::vector<HypothesisCheck> hypotheses;
};

/// Throws HypothesisError naming the first failed hypothesis.
Thm2Report verify_thm2(const RecurrenceSpec& spec, const std::vector<SPartSeriesRecord>& series,
                       unsigned long j0, Precision prec = 128);

// ------------------------------------------------- largest prime factor

/// Least integer v with log log log log v > 0, i.e. ceil(e^(e^e)).
mpz_class thm3_domain_threshold();

struct Thm3Row {
  unsigned long rank = 0;
  mpz_class value;
  IndexTuple witness;
  std::string tag;  // ok | violation | domain | vacuous | unresolved
  mpz_class lpf;    // 0 unless factored
  double rhs = 0;
};

struct Thm3Report {
  double epsilon = 0;
  unsigned k = 0;
  mpz_class threshold;
  std::vector<Thm3Row> rows;
  std::size_t in_domain = 0, violations = 0, unresolved = 0, vacuous = 0;
};

/// (1/k - eps) ll(v) lll(v) / llll(v).
double thm3_rhs(const mpz_class& v, unsigned k, double epsilon);

Thm3Report verify_thm3(const RecurrenceSpec& spec, unsigned k, IndexWindow window,
                       double epsilon, KSumMode mode = KSumMode::kAtMostK,
                       const FactorOptions& options = {});

}  // namespace spartlab
