#include "spartlab/theorems.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "spartlab/errors.hpp"

namespace spartlab {

namespace {

double dlog(const mpz_class& v) {
  long exp = 0;
  double d = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(std::fabs(d)) + static_cast<double>(exp) * std::log(2.0);
}

unsigned long valuation(const mpz_class& c, const mpz_class& p) {
  mpz_class rest = abs(c);
  return mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
}

// Runs fn(i) for i < n on all cores. Results must be written to per-index
// slots by fn; the first exception by index is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
  unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Kronecker: a monic integer polynomial with nonzero constant term has all
// roots in the closed unit disk exactly when it is a product of cyclotomics.
bool cyclotomic_product(const IntegerPolynomial& f) {
  if (!f.is_monic() || abs(f.coeff(0)) != 1) return false;
  IntegerPolynomial rest = f;
  const unsigned long deg = static_cast<unsigned long>(f.degree());
  for (unsigned long n = 1; n <= 2 * deg * deg + 2 && rest.degree() > 0; ++n) {
    if (euler_phi(n) > deg) continue;
    const IntegerPolynomial phi = cyclotomic(static_cast<unsigned>(n));
    while (auto q = exact_quotient(rest, phi)) rest = *q;
  }
  return rest.degree() == 0;
}

}  // namespace

// ------------------------------------------------------------ hypotheses

std::vector<HypothesisCheck> growth_hypotheses(const SpectralData& sd) {
  return {
      {"t >= 2", sd.t() >= 2},
      {"dominant root exists", sd.dominance == Verdict::kYes},
      {"non-degenerate", sd.degenerate == Verdict::kNo},
  };
}

std::vector<HypothesisCheck> gap_hypotheses(const SpectralData& sd) {
  auto checks = growth_hypotheses(sd);
  bool above_one = false;
  if (sd.dominant_index) {
    const RootBox& top = sd.roots[*sd.dominant_index];
    above_one = top.is_real && top.enclosure.real().lower_double() > 1.0;
  }
  checks.push_back({"dominant root is real and > 1", above_one});
  checks.push_back({"dominant root is not a rational integer",
                    sd.dominant_index.has_value() && !sd.dominant_is_rational_integer});
  return checks;
}

// ------------------------------------------------------- Newton polygons

NewtonPolygonData newton_polygon(const IntegerPolynomial& p, const mpz_class& prime) {
  if (p.degree() < 1) throw ValidationError("Newton polygon needs degree >= 1");
  if (!is_prime(prime)) throw ValidationError(prime.get_str() + " is not prime");
  NewtonPolygonData np;
  np.prime = prime;
  const auto& c = p.coefficients();
  while (c[np.zero_roots] == 0) ++np.zero_roots;

  std::vector<std::pair<int, unsigned long>> hull;
  auto below_or_on = [](const std::pair<int, unsigned long>& a,
                        const std::pair<int, unsigned long>& b,
                        const std::pair<int, unsigned long>& q) {
    // b lies on or above segment a-q: drop it from the lower hull.
    mpz_class lhs = mpz_class(static_cast<long>(b.second) - static_cast<long>(a.second)) *
                    (q.first - a.first);
    mpz_class rhs = mpz_class(static_cast<long>(q.second) - static_cast<long>(a.second)) *
                    (b.first - a.first);
    return lhs >= rhs;
  };
  for (int i = np.zero_roots; i <= p.degree(); ++i) {
    if (c[i] == 0) continue;
    std::pair<int, unsigned long> q{i, valuation(c[i], prime)};
    while (hull.size() >= 2 && below_or_on(hull[hull.size() - 2], hull.back(), q)) {
      hull.pop_back();
    }
    hull.push_back(q);
  }
  np.vertices = hull;
  for (std::size_t s = 1; s < hull.size(); ++s) {
    int len = hull[s].first - hull[s - 1].first;
    mpq_class slope(static_cast<long>(hull[s].second) - static_cast<long>(hull[s - 1].second),
                    len);
    slope.canonicalize();
    np.segments.push_back({slope, len});
    np.valuations.emplace_back(-slope, len);
  }
  return np;
}

DeltaReport delta(const RecurrenceSpec& spec, const PrimeSet& primes, Precision prec) {
  const IntegerPolynomial f = char_poly(spec);
  DeltaReport rep;
  if (cyclotomic_product(f)) {
    throw ValidationError("all characteristic roots lie on or inside the unit circle; "
                          "delta's denominator vanishes");
  }
  const SpectralData sd = spectral(spec, prec);
  const Ball top = sd.roots.front().modulus();
  if (!(top.lower_double() > 1.0)) {
    throw PrecisionError("cannot separate the largest root modulus from 1");
  }
  rep.log_max_modulus = log(top).mid_double();

  double numerator = 0;
  rep.exactly_zero = true;
  for (const auto& p : primes.primes()) {
    NewtonPolygonData np = newton_polygon(f, p);
    mpq_class lmin = np.valuations.front().first;
    for (const auto& [v, mult] : np.valuations) lmin = std::min(lmin, v);
    rep.primes.push_back({p, lmin});
    if (lmin != 0) {
      rep.exactly_zero = false;
      numerator += lmin.get_d() * dlog(p);
    }
  }
  rep.delta = rep.exactly_zero ? 0.0 : numerator / rep.log_max_modulus;

  rep.gcd_value = primes.product();
  for (const auto& a : spec.coeffs) mpz_gcd(rep.gcd_value.get_mpz_t(), rep.gcd_value.get_mpz_t(), a.get_mpz_t());
  rep.gcd_condition = rep.gcd_value == 1;
  rep.consistent = rep.exactly_zero == rep.gcd_condition;
  return rep;
}

// ------------------------------------------------------- exponent series

std::vector<SPartSeriesRecord> exponent_series(const RecurrenceSpec& spec, unsigned k,
                                               const PrimeSet& primes, IndexWindow window,
                                               KSumMode mode) {
  const auto records = enumerate_ksums(spec, k, window, mode);
  std::vector<SPartSeriesRecord> out(records.size());
  parallel_for(records.size(), [&](std::size_t i) {
    const auto& r = records[i];
    auto dec = s_part(r.value, primes);
    SPartSeriesRecord s;
    s.rank = r.rank;
    s.value = r.value;
    s.spart = dec.spart;
    s.cofactor = dec.cofactor;
    s.witness = r.witnesses.front();
    if (r.value == 1 || dec.spart == 1) {
      s.exponent = 0;
    } else if (dec.cofactor == 1) {
      s.exponent = 1;
    } else {
      s.exponent = std::clamp(dlog(dec.spart) / dlog(r.value), 0.0, 1.0);
    }
    out[i] = std::move(s);
  });
  return out;
}

std::string series_csv(const std::vector<SPartSeriesRecord>& series) {
  std::ostringstream out;
  out << "j,value,spart,cofactor,exponent,witness\n";
  char buf[64];
  for (const auto& s : series) {
    std::snprintf(buf, sizeof buf, "%.12f", s.exponent);
    out << s.rank << ',' << s.value.get_str() << ',' << s.spart.get_str() << ','
        << s.cofactor.get_str() << ',' << buf << ',' << to_string(s.witness) << '\n';
  }
  return out.str();
}

// ------------------------------------------------------ exponent trend

const char* to_string(TrendVerdict v) {
  switch (v) {
    case TrendVerdict::kConsistent: return "consistent";
    case TrendVerdict::kInconsistent: return "inconsistent";
    case TrendVerdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Thm1Report verify_thm1(const std::vector<SPartSeriesRecord>& series) {
  if (series.empty()) throw ValidationError("theorem-1 check needs a nonempty series");
  std::map<unsigned long, BandMax> bands;
  for (const auto& s : series) {
    unsigned long b = mpz_sizeinbase(s.value.get_mpz_t(), 2) - 1;
    auto& band = bands[b];
    band.band = b;
    band.max_exponent = band.count == 0 ? s.exponent : std::max(band.max_exponent, s.exponent);
    ++band.count;
  }
  Thm1Report rep;
  for (const auto& [b, band] : bands) rep.bands.push_back(band);
  for (const auto& band : rep.bands) rep.global_max = std::max(rep.global_max, band.max_exponent);
  rep.tail_max = rep.bands.back().max_exponent;
  const std::size_t n = rep.bands.size();
  const std::size_t quarter = std::max<std::size_t>(1, (n + 3) / 4);
  for (std::size_t i = 0; i < quarter; ++i) {
    rep.first_quartile_max = std::max(rep.first_quartile_max, rep.bands[i].max_exponent);
    rep.last_quartile_max = std::max(rep.last_quartile_max, rep.bands[n - 1 - i].max_exponent);
  }
  if (n < kMinBands) {
    rep.verdict = TrendVerdict::kInconclusive;
  } else if (rep.tail_max <= rep.global_max &&
             (rep.last_quartile_max < rep.first_quartile_max || rep.last_quartile_max == 0)) {
    rep.verdict = TrendVerdict::kConsistent;
  } else {
    rep.verdict = TrendVerdict::kInconsistent;
  }
  return rep;
}

std::vector<SPartSeriesRecord> adversarial_series() {
  std::vector<SPartSeriesRecord> out;
  for (unsigned long b = 1; b <= 24; ++b) {
    SPartSeriesRecord s;
    s.rank = b;
    mpz_ui_pow_ui(s.value.get_mpz_t(), 2, b);
    s.exponent = static_cast<double>(b) / 25.0;
    s.spart = 1;
    s.cofactor = s.value;
    out.push_back(std::move(s));
  }
  return out;
}

// -------------------------------------------------------- exponent gap

Thm2Report verify_thm2(const RecurrenceSpec& spec, const std::vector<SPartSeriesRecord>& series,
                       unsigned long j0, Precision prec) {
  Thm2Report rep;
  rep.j0 = j0;
  const SpectralData sd = spectral(spec, prec);
  rep.hypotheses = gap_hypotheses(sd);
  for (const auto& h : rep.hypotheses) {
    if (!h.passed) {
      if (h.name == "dominant root is not a rational integer") {
        throw HypothesisError("dominant root is a rational integer");
      }
      throw HypothesisError("hypothesis failed: " + h.name);
    }
  }
  rep.tail_max = 0;
  for (const auto& s : series) {
    if (s.rank < j0) continue;
    ++rep.tail_size;
    rep.tail_max = std::max(rep.tail_max, s.exponent);
  }
  if (rep.tail_size == 0) {
    throw ValidationError("no records with rank >= " + std::to_string(j0));
  }
  rep.c_hat = 1 - rep.tail_max;
  rep.positive = rep.c_hat > 0;
  const double cut = 1 - rep.c_hat;
  rep.c2_proxy = series.empty() ? 0 : series.back().rank;
  for (auto it = series.rbegin(); it != series.rend(); ++it) {
    if (it->exponent > cut) break;
    rep.c2_proxy = it->rank;
  }
  return rep;
}

// ------------------------------------------------- largest prime factor

mpz_class thm3_domain_threshold() {
  static const mpz_class threshold = [] {
    Real x(256);
    mpfr_set_ui(x.get(), 1, MPFR_RNDU);
    for (int i = 0; i < 3; ++i) mpfr_exp(x.get(), x.get(), MPFR_RNDU);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), x.get(), MPFR_RNDU);
    return z;
  }();
  return threshold;
}

double thm3_rhs(const mpz_class& v, unsigned k, double epsilon) {
  if (v < thm3_domain_threshold()) return std::numeric_limits<double>::quiet_NaN();
  Real l1(128), l2(128), l3(128), l4(128), out(128);
  mpfr_set_z(l1.get(), v.get_mpz_t(), MPFR_RNDN);
  mpfr_log(l1.get(), l1.get(), MPFR_RNDN);
  mpfr_log(l2.get(), l1.get(), MPFR_RNDN);
  mpfr_log(l3.get(), l2.get(), MPFR_RNDN);
  mpfr_log(l4.get(), l3.get(), MPFR_RNDN);
  mpfr_mul(out.get(), l2.get(), l3.get(), MPFR_RNDN);
  mpfr_div(out.get(), out.get(), l4.get(), MPFR_RNDN);
  return (1.0 / k - epsilon) * out.to_double();
}

Thm3Report verify_thm3(const RecurrenceSpec& spec, unsigned k, IndexWindow window,
                       double epsilon, KSumMode mode, const FactorOptions& options) {
  if (!(epsilon > 0)) throw ValidationError("epsilon must be positive");
  Thm3Report rep;
  rep.epsilon = epsilon;
  rep.k = k;
  rep.threshold = thm3_domain_threshold();
  const auto records = enumerate_ksums(spec, k, window, mode);
  rep.rows.resize(records.size());
  const bool vacuous = 1.0 / k - epsilon <= 0;
  parallel_for(records.size(), [&](std::size_t i) {
    Thm3Row& row = rep.rows[i];
    row.rank = records[i].rank;
    row.value = records[i].value;
    row.witness = records[i].witnesses.front();
    row.lpf = 0;
    if (row.value < rep.threshold) {
      row.tag = "domain";
      return;
    }
    row.rhs = thm3_rhs(row.value, k, epsilon);
    if (vacuous) {
      row.tag = "vacuous";
      return;
    }
    try {
      row.lpf = largest_prime_factor(row.value, options);
      row.tag = row.lpf > row.rhs ? "ok" : "violation";
    } catch (const EffortCapError&) {
      row.tag = "unresolved";
    }
  });
  for (const auto& row : rep.rows) {
    if (row.tag == "domain") continue;
    ++rep.in_domain;
    if (row.tag == "violation") ++rep.violations;
    if (row.tag == "unresolved") ++rep.unresolved;
    if (row.tag == "vacuous") ++rep.vacuous;
  }
  return rep;
}

}  // namespace spartlab
