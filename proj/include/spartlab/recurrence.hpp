#pragma once

#include <gmpxx.h>

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "spartlab/polynomial.hpp"
#include "spartlab/roots.hpp"

namespace spartlab {

/// U_n = a_1 U_{n-1} + ... + a_r U_{n-r} with initial terms U_0..U_{r-1}.
struct RecurrenceSpec {
  std::string name;
  std::vector<mpz_class> coeffs;   // a_1..a_r
  std::vector<mpz_class> initial;  // U_0..U_{r-1}

  int order() const { return static_cast<int>(coeffs.size()); }
  /// Throws ValidationError unless r >= 1, a_r != 0, sizes agree and some
  /// initial term is nonzero.
  void validate() const;
};

RecurrenceSpec make_spec(std::string name, std::vector<long> coeffs,
                         std::vector<long> initial);

/// fibonacci, lucas, pell, tribonacci.
RecurrenceSpec preset(const std::string& name);
std::vector<std::string> preset_names();

/// {"name": str, "coeffs": [int...], "initial": [int...]}; big integers may
/// be given as decimal strings.
RecurrenceSpec spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json spec_to_json(const RecurrenceSpec& spec);
RecurrenceSpec load_spec(const std::string& path);

/// Yields U_0, U_1, ... exactly.
class TermIterator {
 public:
  explicit TermIterator(const RecurrenceSpec& spec);
  const mpz_class& operator*() const { return window_[pos_]; }
  TermIterator& operator++();
  unsigned long index() const { return index_; }

 private:
  std::vector<mpz_class> coeffs_;
  std::vector<mpz_class> window_;  // ring buffer of the last r terms
  std::size_t pos_ = 0;
  unsigned long index_ = 0;
};

mpz_class term(const RecurrenceSpec& spec, unsigned long n);
/// U_0..U_n inclusive.
std::vector<mpz_class> terms(const RecurrenceSpec& spec, unsigned long n);

/// x^r - a_1 x^{r-1} - ... - a_r.
IntegerPolynomial char_poly(const RecurrenceSpec& spec);

enum class Verdict { kNo, kYes, kUndecided };
const char* to_string(Verdict v);

struct DegeneracyWitness {
  std::optional<std::size_t> i, j;  // root indices with (alpha_i/alpha_j)^order = 1
  unsigned order = 0;
};

struct SpectralData {
  IntegerPolynomial poly;
  std::vector<RootBox> roots;  // sorted by decreasing modulus
  Precision precision = 128;   // precision at which the verdicts were reached
  Verdict dominance = Verdict::kUndecided;
  std::optional<std::size_t> dominant_index;
  /// Enclosure of |alpha_1| - max_{j>=2} |alpha_j| (when dominant).
  std::optional<Ball> dominant_margin;
  Verdict degenerate = Verdict::kUndecided;
  std::optional<DegeneracyWitness> witness;
  bool dominant_is_rational_integer = false;
  std::optional<mpz_class> dominant_integer;

  std::size_t t() const { return roots.size(); }
  const RootBox& dominant() const;  // throws HypothesisError without one
};

/// Certified spectral analysis. Dominance retries with doubled precision up
/// to kMaxPrecision and stays kUndecided only if moduli still overlap without
/// an exact explanation (conjugate pair or +/- alpha). Degeneracy is decided
/// exactly: some Phi_n divides Res_x(f(x), f(yx)).
SpectralData spectral(const IntegerPolynomial& poly, Precision prec = 128);
SpectralData spectral(const RecurrenceSpec& spec, Precision prec = 128);

/// Monic minimal polynomial of roots[index]; needs a monic `poly`.
IntegerPolynomial minimal_polynomial(const SpectralData& sd, std::size_t index);

struct IndependenceReport {
  bool hypothesis_met = false;  // |alpha_1| > 1 > |alpha_2| >= ... certified
  bool product_modulus_one = false;  // t = 2 and |alpha_1 alpha_2| = 1 exactly
  struct Pair {
    std::size_t i, j;
    bool independent;  // false: dependence possible
  };
  std::vector<Pair> pairs;
};

IndependenceReport multiplicative_independence(const SpectralData& sd);

std::vector<unsigned long> zero_multiplicity_scan(const RecurrenceSpec& spec,
                                                  unsigned long n_max);

}  // namespace spartlab
