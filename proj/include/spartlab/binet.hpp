#pragma once

#include <vector>

#include "spartlab/recurrence.hpp"

namespace spartlab {

/// U_n = sum_i f_i(n) alpha_i^n with f_i(n) = sum_l beta[i][l] n^l.
struct BinetCoefficients {
  SpectralData spectral;
  std::vector<std::vector<CBall>> beta;  // beta[i].size() == m_i
  double condition = 0;                  // rough condition estimate of the solve

  Precision precision() const { return spectral.precision; }
  /// f_i(n) as an enclosure.
  CBall f(std::size_t i, unsigned long n) const;
};

/// Solves the confluent Vandermonde system sum_{i,l} beta_{i,l} n^l alpha_i^n
/// = U_n, n < r, by partial-pivoting elimination in ball arithmetic. Throws
/// PrecisionError (with the condition estimate) when a pivot encloses zero.
BinetCoefficients solve_coefficients(const RecurrenceSpec& spec, const SpectralData& sd);

/// sum_i f_i(n) alpha_i^n with propagated radius.
CBall reconstruct(const BinetCoefficients& coeffs, unsigned long n);

struct GrowthReport {
  unsigned long lo = 0, hi = 0;
  double c4 = 0;  // min |f_i(n)|
  double c5 = 0;  // max |f_i(n)| / n^(m_i - 1)
  double c6 = 0;  // max |U_n| / (n^(r-1) |alpha_1|^n)
  struct Excluded {
    std::size_t root;
    unsigned long n;
  };
  std::vector<Excluded> excluded;  // f_i(n) not separated from zero
};

/// Measures the growth constants over n in [lo, hi]. Needs a dominant root.
GrowthReport growth_constants(const RecurrenceSpec& spec, const BinetCoefficients& coeffs,
                              unsigned long lo, unsigned long hi);

}  // namespace spartlab
