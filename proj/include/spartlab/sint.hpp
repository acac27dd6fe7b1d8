#pragma once

// Exact integer arithmetic on S-parts: primality, factorization and largest
// prime factors at desk scale (inputs up to roughly 2^128).

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spartlab {

enum class Primality { kComposite, kPrime, kProbablePrime };

/// Miller-Rabin with a fixed witness set (the first 13 primes), which is a
/// proof of primality below 3.317e24. Larger inputs get extra pseudo-random
/// bases and are reported as probable primes.
Primality primality(const mpz_class& n);
bool is_prime(const mpz_class& n);  // prime or probable prime

/// Finite, non-empty set of distinct primes kept in increasing order.
class PrimeSet {
 public:
  /// Sorts the input; rejects empty sets, duplicates and non-primes.
  explicit PrimeSet(std::vector<mpz_class> primes);
  PrimeSet(std::initializer_list<unsigned long> primes);

  const std::vector<mpz_class>& primes() const noexcept { return primes_; }
  std::size_t size() const noexcept { return primes_.size(); }
  const mpz_class& operator[](std::size_t i) const { return primes_[i]; }
  mpz_class product() const;
  std::string to_string() const;  // "2,3,5"

  friend bool operator==(const PrimeSet&, const PrimeSet&) = default;

 private:
  std::vector<mpz_class> primes_;
};

/// n = spart * cofactor with spart = prod p_i^exponents[i] and the cofactor
/// coprime to every p_i.
struct SPartDecomposition {
  mpz_class n;
  mpz_class spart;
  mpz_class cofactor;
  std::vector<unsigned long> exponents;
};

/// Divides out the primes of S only; the cofactor is never factored.
/// Throws ValidationError for n < 1.
SPartDecomposition s_part(const mpz_class& n, const PrimeSet& primes);

struct PrimePower {
  mpz_class prime;
  unsigned long exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  std::vector<PrimePower> factors;  // increasing primes
  bool probable = false;            // some factor is only a probable prime

  mpz_class product() const;
  const mpz_class& largest_prime() const;  // requires non-empty
};

struct FactorOptions {
  /// Primes up to this bound are removed by trial division.
  std::uint32_t trial_bound = 1'000'000;
  /// Iteration budget for each rho attempt on a composite cofactor.
  std::uint64_t rho_iterations = 2'000'000;
  /// Independent rho attempts (distinct seeded polynomials) before giving up.
  unsigned rho_attempts = 16;
  std::uint64_t seed = 0x5eed;
};

/// Full factorization of n >= 1. Throws EffortCapError when a composite
/// cofactor resists the configured effort.
Factorization factor(const mpz_class& n, const FactorOptions& options = {});

/// P[n]; 1 for n in {0, 1, -1}. Sign is ignored.
mpz_class largest_prime_factor(const mpz_class& n, const FactorOptions& options = {});

/// Primes up to `bound`, computed once per process and then shared read-only.
std::span<const std::uint32_t> small_primes(std::uint32_t bound = 1'000'000);

}  // namespace spartlab
