#pragma once

#include <optional>
#include <vector>

#include "spartlab/ball.hpp"
#include "spartlab/polynomial.hpp"

namespace spartlab {

/// Certified enclosure of one distinct root.
struct RootBox {
  CBall enclosure;  // disk known to contain exactly this root and no other
  int multiplicity = 1;
  bool is_real = false;
  /// Index of the complex-conjugate box, for non-real roots.
  std::optional<std::size_t> conjugate;
  /// Index into squarefree_decomposition(p) of the factor owning this root.
  std::size_t factor_index = 0;

  Ball modulus() const { return enclosure.abs(); }
};

inline constexpr Precision kMaxPrecision = 1024;

/// Encloses every distinct root of p in pairwise disjoint disks whose radii are
/// at most 2^(-prec/2) max(1, |root|). Multiplicities come from the exact
/// squarefree decomposition. Starts at `prec` bits and doubles up to
/// `max_prec`; throws PrecisionError when certification still fails.
///
/// Order: decreasing modulus, then decreasing real part, then decreasing
/// imaginary part.
std::vector<RootBox> isolate_roots(const IntegerPolynomial& p, Precision prec = 128,
                                   Precision max_prec = kMaxPrecision);

}  // namespace spartlab
