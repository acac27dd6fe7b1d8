#include "spartlab/sint.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

#include "spartlab/errors.hpp"

namespace spartlab {

namespace {

constexpr std::uint32_t kSieveLimit = 1'000'000;
constexpr unsigned long kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
constexpr unsigned kExtraRounds = 24;

// Miller-Rabin with the first 13 prime bases is deterministic below this.
const mpz_class& deterministic_limit() {
  static const mpz_class limit("3317044064679887385961981");
  return limit;
}

std::vector<std::uint32_t> sieve(std::uint32_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = std::uint64_t{i} * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

bool strong_probable_prime(const mpz_class& n, const mpz_class& base,
                           const mpz_class& d, unsigned long s) {
  mpz_class nm1 = n - 1;
  mpz_class x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == nm1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = (x * x) % n;
    if (x == nm1) return true;
    if (x == 1) return false;
  }
  return false;
}

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0.
mpz_class rho(const mpz_class& n, unsigned long c, const mpz_class& start,
              std::uint64_t budget) {
  mpz_class y = start % n, x, ys, q = 1, g = 1;
  auto f = [&](mpz_class& v) {
    v = (v * v + c) % n;
  };
  const std::uint64_t block = 128;
  std::uint64_t r = 1, spent = 0;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) f(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      std::uint64_t steps = std::min(block, r - k);
      for (std::uint64_t i = 0; i < steps; ++i) {
        f(y);
        mpz_class diff = x - y;
        q = (q * abs(diff)) % n;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += steps;
      spent += steps;
      if (spent > budget) return 0;
    }
    r *= 2;
  }
  if (g == n) {
    // The batched gcd overshot; step singly from the saved point.
    do {
      f(ys);
      mpz_class diff = x - ys;
      mpz_class a = abs(diff);
      mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g == n ? mpz_class(0) : g;
}

void split_composite(const mpz_class& n, const FactorOptions& options,
                     std::map<mpz_class, unsigned long>& out, bool& probable) {
  Primality pr = primality(n);
  if (pr != Primality::kComposite) {
    out[n] += 1;
    if (pr == Primality::kProbablePrime) probable = true;
    return;
  }
  mpz_class root;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    split_composite(root, options, out, probable);
    split_composite(root, options, out, probable);
    return;
  }
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(static_cast<unsigned long>(options.seed));
  for (unsigned attempt = 0; attempt < options.rho_attempts; ++attempt) {
    mpz_class start = rng.get_z_range(n);
    mpz_class d = rho(n, 1 + attempt, start, options.rho_iterations);
    if (d != 0) {
      split_composite(d, options, out, probable);
      split_composite(n / d, options, out, probable);
      return;
    }
  }
  throw EffortCapError("factorization effort cap exceeded on a composite cofactor of " +
                       std::to_string(mpz_sizeinbase(n.get_mpz_t(), 10)) + " digits");
}

}  // namespace

std::span<const std::uint32_t> small_primes(std::uint32_t bound) {
  static const std::vector<std::uint32_t> table = sieve(kSieveLimit);
  if (bound > kSieveLimit) {
    throw ValidationError("trial-division bound above " + std::to_string(kSieveLimit));
  }
  auto end = std::upper_bound(table.begin(), table.end(), bound);
  return {table.data(), static_cast<std::size_t>(end - table.begin())};
}

Primality primality(const mpz_class& n) {
  if (n < 2) return Primality::kComposite;
  for (unsigned long p : kWitnesses) {
    if (n == p) return Primality::kPrime;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return Primality::kComposite;
  }
  mpz_class d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  for (unsigned long a : kWitnesses) {
    if (!strong_probable_prime(n, mpz_class(a), d, s)) return Primality::kComposite;
  }
  if (n < deterministic_limit()) return Primality::kPrime;
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(0x9e3779b9UL);
  mpz_class span = n - 3;
  for (unsigned i = 0; i < kExtraRounds; ++i) {
    mpz_class base = rng.get_z_range(span) + 2;
    if (!strong_probable_prime(n, base, d, s)) return Primality::kComposite;
  }
  return Primality::kProbablePrime;
}

bool is_prime(const mpz_class& n) { return primality(n) != Primality::kComposite; }

// ------------------------------------------------------------- PrimeSet

PrimeSet::PrimeSet(std::vector<mpz_class> primes) : primes_(std::move(primes)) {
  if (primes_.empty()) throw ValidationError("prime set must be non-empty");
  std::sort(primes_.begin(), primes_.end());
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (i > 0 && primes_[i] == primes_[i - 1]) {
      throw ValidationError("duplicate prime " + primes_[i].get_str() + " in prime set");
    }
    if (!is_prime(primes_[i])) {
      throw ValidationError(primes_[i].get_str() + " is not prime");
    }
  }
}

PrimeSet::PrimeSet(std::initializer_list<unsigned long> primes)
    : PrimeSet([&] {
        std::vector<mpz_class> v;
        for (unsigned long p : primes) v.emplace_back(p);
        return v;
      }()) {}

mpz_class PrimeSet::product() const {
  mpz_class prod = 1;
  for (const auto& p : primes_) prod *= p;
  return prod;
}

std::string PrimeSet::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (i) out << ',';
    out << primes_[i].get_str();
  }
  return out.str();
}

SPartDecomposition s_part(const mpz_class& n, const PrimeSet& primes) {
  if (n < 1) throw ValidationError("S-part is defined for positive integers only");
  SPartDecomposition d{n, 1, n, {}};
  d.exponents.reserve(primes.size());
  for (const auto& p : primes.primes()) {
    unsigned long e = mpz_remove(d.cofactor.get_mpz_t(), d.cofactor.get_mpz_t(),
                                 p.get_mpz_t());
    d.exponents.push_back(e);
    if (e > 0) {
      mpz_class pe;
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
      d.spart *= pe;
    }
  }
  return d;
}

// ---------------------------------------------------------- factorization

mpz_class Factorization::product() const {
  mpz_class prod = 1;
  for (const auto& f : factors) {
    mpz_class pe;
    mpz_pow_ui(pe.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
    prod *= pe;
  }
  return prod;
}

const mpz_class& Factorization::largest_prime() const {
  if (factors.empty()) throw ValidationError("empty factorization has no largest prime");
  return factors.back().prime;
}

Factorization factor(const mpz_class& n, const FactorOptions& options) {
  if (n < 1) throw ValidationError("factor() needs n >= 1");
  std::map<mpz_class, unsigned long> found;
  bool probable = false;
  mpz_class m = n;
  bool exhausted_trial = true;

  auto primes = small_primes(options.trial_bound);
  if (mpz_fits_ulong_p(m.get_mpz_t())) {
    unsigned long v = m.get_ui();
    for (std::uint32_t p : primes) {
      if (std::uint64_t{p} * p > v) {
        exhausted_trial = false;
        break;
      }
      if (v % p == 0) {
        unsigned long e = 0;
        do {
          v /= p;
          ++e;
        } while (v % p == 0);
        found[mpz_class(static_cast<unsigned long>(p))] = e;
      }
    }
    m = v;
  } else {
    for (std::uint32_t p : primes) {
      if (mpz_cmp_ui(m.get_mpz_t(), std::uint64_t{p} * p) < 0) {
        exhausted_trial = false;
        break;
      }
      if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        unsigned long e = 0;
        do {
          mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
          ++e;
        } while (mpz_divisible_ui_p(m.get_mpz_t(), p));
        found[mpz_class(static_cast<unsigned long>(p))] = e;
      }
    }
  }

  if (m > 1) {
    mpz_class bound = options.trial_bound;
    if (!exhausted_trial || m < bound * bound) {
      found[m] += 1;  // no factor up to sqrt(m)
    } else {
      split_composite(m, options, found, probable);
    }
  }

  Factorization result;
  result.probable = probable;
  for (auto& [p, e] : found) result.factors.push_back({p, e});
  return result;
}

mpz_class largest_prime_factor(const mpz_class& n, const FactorOptions& options) {
  mpz_class m = abs(n);
  if (m <= 1) return 1;
  return factor(m, options).largest_prime();
}

}  // namespace spartlab
