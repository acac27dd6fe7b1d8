#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "spartlab/binet.hpp"
#include "spartlab/ksum.hpp"
#include "spartlab/sint.hpp"

namespace spartlab {

// ------------------------------------------------------------------ heights

enum class HeightMethod { kMahlerMeasure, kRationalShortcut, kCyclotomic };
const char* to_string(HeightMethod m);

struct HeightValue {
  Ball enclosure;
  HeightMethod method = HeightMethod::kMahlerMeasure;
  IntegerPolynomial poly;
  /// False when the input is visibly not a minimal polynomial (not
  /// primitive, not squarefree, or a proper factor was found).
  bool minimal = true;
  std::string note;

  double value() const { return enclosure.mid_double(); }
};

/// (1/deg)(log|lc| + sum log max(1, |root|)). Degree-1 inputs use
/// log max(|p|, |q|); products of cyclotomic polynomials give exactly 0.
HeightValue height_from_minpoly(const IntegerPolynomial& p, Precision prec = 128,
                                bool force_mahler = false);

// ------------------------------------------------------------------ Matveev

struct MatveevInstance {
  int m = 2;
  double D = 1;
  std::vector<double> logA;
  double B = 1;
};

/// Lower bound L for log|Lambda|:
/// -4 30^(m+4) (m+1)^5.5 D^(m+2) log(eD) log(eB) prod log A_j.
double matveev_bound(const MatveevInstance& inst);
/// The same bound divided by log(eB).
double matveev_prefactor(const MatveevInstance& inst);
/// max(1, max_j |b_j| log A_j / log A_m).
double matveev_B(const std::vector<double>& b, const std::vector<double>& logA);

// -------------------------------------------------------------- linear forms

/// U_{n_k} + ... + U_{n_1} = p_1^{r_1} ... p_s^{r_s} M.
struct LambdaInstance {
  IndexTuple indices;  // n_k > ... > n_1
  PrimeSet primes;
  std::vector<unsigned long> exponents;
  mpz_class M;
  mpz_class value;
};

/// Builds the instance from the index tuple (exponents and M via s_part).
LambdaInstance make_lambda_instance(const RecurrenceSpec& spec, const IndexTuple& indices,
                                    const PrimeSet& primes);
/// Exact check of the defining identity and of n_k > ... > n_1.
void verify_lambda_instance(const RecurrenceSpec& spec, const LambdaInstance& inst);

/// Linear-form level: 1 is Lambda_1 (no correction terms); 2..k-1 are the
/// intermediate forms with corrections from n_i..n_{k-1}; k is the full form
/// with corrections from n_1..n_{k-1}. With k = 1 the only level is 1.
std::vector<unsigned> lambda_levels(unsigned k);
std::string lambda_name(unsigned level, unsigned k);
/// Positions (1-based, n_1 smallest) whose terms enter the correction factor.
std::vector<unsigned> correction_positions(unsigned level, unsigned k);

struct LambdaValue {
  CBall value;
  Precision precision = 0;
  bool nonzero = false;
};

inline constexpr Precision kLambdaStartPrecision = 256;
inline constexpr Precision kLambdaMaxPrecision = 4096;

/// Lambda at `level`, starting at 256 bits and doubling (recomputing roots and
/// Binet coefficients) up to 4096 until the enclosure excludes zero.
LambdaValue lambda_eval(const RecurrenceSpec& spec, const BinetCoefficients& coeffs,
                        unsigned level, const LambdaInstance& inst);

/// The full form rewritten exactly as (non-dominant part)/(dominant part).
CBall lambda_full_rearranged(const BinetCoefficients& coeffs, const LambdaInstance& inst);

// ---------------------------------------------------------- vanishing forms

struct VanishingFormReport {
  std::size_t conjugate_index = 0;
  bool conjugate_outside_unit_circle = false;  // selects the second branch
  double c17 = 0, c18 = 0, g = 0;
  double threshold = 0;
  GrowthReport growth;
};

/// Threshold ell such that a vanishing linear form forces n_k < ell. The
/// conjugate defaults to the largest-modulus conjugate of alpha_1.
VanishingFormReport vanishing_form_threshold(const RecurrenceSpec& spec, const BinetCoefficients& coeffs,
                                  unsigned k, std::optional<std::size_t> conjugate = {},
                                  IndexWindow growth_window = {1, 100});

// ------------------------------------------------------------ chain report

struct LambdaFormRecord {
  unsigned level = 1;
  std::string name;
  std::vector<unsigned> corrections;
  LambdaValue lambda;
  double log_abs = 0;        // midpoint of log|Lambda|
  double log_abs_upper = 0;  // certified upper end
  MatveevInstance matveev;
  double matveev_lower = 0;
  double composite_height = 0;  // upper estimate of h(gamma_m)
  std::string constant_name;
  std::optional<double> constant;
  bool constant_positive = false;
  std::optional<double> vanishing_form_threshold;  // set only if Lambda may vanish
};

struct LambdaChainReport {
  LambdaInstance instance;
  unsigned k = 0;
  double Q = 0;           // prod log p_i
  double logA_bound = 0;  // max(log M + h(beta), 2)
  double h_alpha = 0;
  double h_beta_bound = 0;
  int D = 1;  // [Q(alpha_1) : Q]
  std::vector<LambdaFormRecord> forms{};
  bool rearranged_agrees = false;
  double nk_ceiling = 0;
  std::vector<std::string> notes{};
};

/// Full proof-chain measurement for one instance. Needs a simple dominant
/// root alpha_1 > 1 that is not a rational integer. Throws InternalError if
/// a measured log|Lambda| falls below Matveev's bound.
LambdaChainReport lambda_chain_report(const RecurrenceSpec& spec, unsigned k,
                                      const LambdaInstance& inst,
                                      Precision prec = kLambdaStartPrecision);

nlohmann::ordered_json to_json(const LambdaChainReport& rep);

/// Upper bound on h(f_1) for a simple dominant root, via f_1 = H(alpha)/f'(alpha).
double binet_height_bound(const RecurrenceSpec& spec, double h_alpha);

// ------------------------------------------------------- solution counting

struct SUnitCountBound {
  double log10_bound = 0;  // +inf when not representable
  bool overflow = false;
  mpz_class exponent;      // 36 M d!
  std::string log10_text;  // decimal rendering, valid even on overflow
};

/// log10 of (4 s d!)^(2^(36 M d!)) s^6.
SUnitCountBound sunit_count_log_bound(unsigned long s, unsigned long d, unsigned long M);

}  // namespace spartlab
