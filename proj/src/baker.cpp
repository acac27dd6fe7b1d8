#include "spartlab/baker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spartlab/errors.hpp"

namespace spartlab {

namespace {

double dlog(const mpz_class& v) {
  long exp = 0;
  double d = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(std::fabs(d)) + static_cast<double>(exp) * std::log(2.0);
}

// |log z| with the principal branch, from the midpoint.
double abs_log(const CBall& z) {
  double re = z.re().to_double(), im = z.im().to_double();
  Real m(z.precision());
  mpfr_hypot(m.get(), z.re().get(), z.im().get(), MPFR_RNDN);
  mpfr_log(m.get(), m.get(), MPFR_RNDN);
  double lm = m.to_double();
  double arg = std::atan2(im, re);
  return std::hypot(lm, arg) * (1 + 1e-12);
}

unsigned long index_at(const LambdaInstance& inst, unsigned position) {
  // position is 1-based with n_1 the smallest index.
  return inst.indices[inst.indices.size() - position];
}

CBall lambda_at(const BinetCoefficients& coeffs, unsigned level, const LambdaInstance& inst,
                CBall* composite = nullptr) {
  const Precision prec = coeffs.precision();
  const std::size_t dom = *coeffs.spectral.dominant_index;
  const CBall& alpha = coeffs.spectral.roots[dom].enclosure;
  const unsigned k = static_cast<unsigned>(inst.indices.size());
  const unsigned long nk = inst.indices.front();
  CBall f1k = coeffs.f(dom, nk);
  CBall corr = CBall::from_int(1, prec);
  for (unsigned pos : correction_positions(level, k)) {
    unsigned long nj = index_at(inst, pos);
    corr = corr + coeffs.f(dom, nj) / f1k *
                      pow(alpha, static_cast<long>(nj) - static_cast<long>(nk));
  }
  if (composite) *composite = CBall::from_int(inst.M, prec) / f1k / corr;
  CBall v = CBall::from_int(inst.value, prec);
  return v / f1k * pow(alpha, -static_cast<long>(nk)) / corr - CBall::from_int(1, prec);
}

}  // namespace

// ------------------------------------------------------------------ heights

const char* to_string(HeightMethod m) {
  switch (m) {
    case HeightMethod::kMahlerMeasure: return "mahler-measure";
    case HeightMethod::kRationalShortcut: return "rational-shortcut";
    case HeightMethod::kCyclotomic: return "cyclotomic";
  }
  return "mahler-measure";
}

HeightValue height_from_minpoly(const IntegerPolynomial& p, Precision prec, bool force_mahler) {
  if (p.degree() < 1) throw ValidationError("height needs a polynomial of degree >= 1");
  HeightValue h;
  h.poly = p;
  IntegerPolynomial prim = p.primitive_part();
  if (p.content() != 1) {
    h.minimal = false;
    h.note = "input is not primitive";
  }
  if (squarefree_part(prim).degree() != prim.degree()) {
    h.minimal = false;
    h.note = "input is not squarefree";
  }
  const int deg = prim.degree();

  if (deg == 1 && !force_mahler) {
    h.method = HeightMethod::kRationalShortcut;
    mpz_class top = std::max(abs(prim.coeff(0)), abs(prim.coeff(1)));
    h.enclosure = log_of(top, prec);
    return h;
  }

  if (!force_mahler && prim.is_monic() && abs(prim.coeff(0)) == 1) {
    IntegerPolynomial rest = prim;
    const unsigned long bound = 2UL * deg * deg + 2;
    for (unsigned long n = 1; n <= bound && rest.degree() > 0; ++n) {
      if (euler_phi(n) > static_cast<unsigned long>(deg)) continue;
      IntegerPolynomial phi = cyclotomic(static_cast<unsigned>(n));
      while (auto q = exact_quotient(rest, phi)) rest = *q;
    }
    if (rest.degree() == 0 && abs(rest.coeff(0)) == 1) {
      h.method = HeightMethod::kCyclotomic;
      h.enclosure = Ball(prec);
      return h;
    }
  }

  h.method = HeightMethod::kMahlerMeasure;
  auto roots = isolate_roots(prim, prec);
  Ball sum = log_of(prim.leading(), prec);
  Ball one = Ball::from_int(1, prec);
  for (const auto& b : roots) {
    Ball term = log(max(one, b.modulus()));
    for (int i = 0; i < b.multiplicity; ++i) sum = sum + term;
  }
  h.enclosure = sum / Ball::from_int(deg, prec);

  if (h.minimal && prim.is_monic() && deg > 1) {
    SpectralData sd;
    sd.poly = prim;
    sd.roots = roots;
    sd.precision = roots.front().enclosure.precision();
    try {
      if (minimal_polynomial(sd, 0).degree() < deg) {
        h.minimal = false;
        h.note = "input is reducible";
      }
    } catch (const PrecisionError&) {
      h.note = "irreducibility not confirmed";
    }
  }
  return h;
}

// ------------------------------------------------------------------ Matveev

double matveev_prefactor(const MatveevInstance& inst) {
  if (inst.m < 2) throw ValidationError("Matveev bound needs m >= 2");
  if (inst.D < 1) throw ValidationError("Matveev bound needs D >= 1");
  if (inst.B < 1) throw ValidationError("Matveev bound needs B >= 1");
  if (static_cast<int>(inst.logA.size()) != inst.m) {
    throw ValidationError("Matveev bound needs exactly m values log A_j");
  }
  const double m = inst.m;
  double log_c = std::log(4.0) + (m + 4) * std::log(30.0) + 5.5 * std::log(m + 1) +
                 (m + 2) * std::log(inst.D) + std::log(1 + std::log(inst.D));
  for (double a : inst.logA) {
    if (!(a > 0)) throw ValidationError("Matveev bound needs every log A_j > 0");
    log_c += std::log(a);
  }
  return -std::exp(log_c);
}

double matveev_bound(const MatveevInstance& inst) {
  return matveev_prefactor(inst) * (1 + std::log(inst.B));
}

double matveev_B(const std::vector<double>& b, const std::vector<double>& logA) {
  if (b.size() != logA.size() || b.empty()) {
    throw ValidationError("matveev_B needs equally many exponents and heights");
  }
  const double last = logA.back();
  if (!(last > 0)) throw ValidationError("matveev_B needs log A_m > 0");
  double B = 1;
  for (std::size_t j = 0; j < b.size(); ++j) B = std::max(B, std::fabs(b[j]) * logA[j] / last);
  return B;
}

// -------------------------------------------------------------- linear forms

LambdaInstance make_lambda_instance(const RecurrenceSpec& spec, const IndexTuple& indices,
                                    const PrimeSet& primes) {
  if (indices.empty()) throw ValidationError("instance needs at least one index");
  for (std::size_t i = 1; i < indices.size(); ++i) {
    if (indices[i] >= indices[i - 1]) {
      throw ValidationError("instance indices must be strictly decreasing (n_k > ... > n_1)");
    }
  }
  const auto u = terms(spec, indices.front());
  mpz_class value = 0;
  for (unsigned long n : indices) value += u[n];
  if (value < 1) throw ValidationError("instance sum must be positive");
  auto dec = s_part(value, primes);
  return LambdaInstance{indices, primes, dec.exponents, dec.cofactor, value};
}

void verify_lambda_instance(const RecurrenceSpec& spec, const LambdaInstance& inst) {
  if (inst.indices.empty()) throw ValidationError("instance needs at least one index");
  for (std::size_t i = 1; i < inst.indices.size(); ++i) {
    if (inst.indices[i] >= inst.indices[i - 1]) {
      throw ValidationError("instance indices must be strictly decreasing (n_k > ... > n_1)");
    }
  }
  if (inst.exponents.size() != inst.primes.size()) {
    throw ValidationError("instance needs one exponent per prime");
  }
  const auto u = terms(spec, inst.indices.front());
  mpz_class sum = 0;
  for (unsigned long n : inst.indices) sum += u[n];
  mpz_class rhs = inst.M;
  for (std::size_t j = 0; j < inst.primes.size(); ++j) {
    mpz_class pe;
    mpz_pow_ui(pe.get_mpz_t(), inst.primes[j].get_mpz_t(), inst.exponents[j]);
    rhs *= pe;
  }
  if (sum != rhs || sum != inst.value) {
    throw ValidationError("instance identity fails: sum of terms is " + sum.get_str() +
                          " but the S-unit side is " + rhs.get_str());
  }
}

std::vector<unsigned> lambda_levels(unsigned k) {
  std::vector<unsigned> out{1};
  for (unsigned i = 2; i <= k; ++i) out.push_back(i);
  return out;
}

std::string lambda_name(unsigned level, unsigned k) {
  if (level == 1) return k == 1 ? "Lambda_1=Lambda_k" : "Lambda_1";
  if (level == k) return "Lambda_k";
  return "Lambda_" + std::to_string(level);
}

std::vector<unsigned> correction_positions(unsigned level, unsigned k) {
  std::vector<unsigned> out;
  if (level == 1 || k < 2) return out;
  const unsigned first = level == k ? 1 : level;
  for (unsigned j = first; j + 1 <= k; ++j) out.push_back(j);
  return out;
}

LambdaValue lambda_eval(const RecurrenceSpec& spec, const BinetCoefficients& coeffs,
                        unsigned level, const LambdaInstance& inst) {
  verify_lambda_instance(spec, inst);
  const unsigned k = static_cast<unsigned>(inst.indices.size());
  if (level < 1 || level > k) throw ValidationError("linear-form level out of range");
  if (!coeffs.spectral.dominant_index) throw HypothesisError("no dominant root");

  BinetCoefficients cur = coeffs;
  if (cur.precision() < kLambdaStartPrecision) {
    cur = solve_coefficients(spec, spectral(spec, kLambdaStartPrecision));
  }
  LambdaValue out;
  while (true) {
    try {
      if (coeffs.spectral.dominant_index && cur.f(*cur.spectral.dominant_index,
                                                   inst.indices.front()).contains_zero()) {
        throw PrecisionError("f_1(n_k) not separated from zero");
      }
      out.value = lambda_at(cur, level, inst);
      out.precision = cur.precision();
      out.nonzero = !out.value.contains_zero();
      if (out.nonzero) return out;
    } catch (const PrecisionError&) {
      out.precision = cur.precision();
      out.nonzero = false;
    }
    Precision next = cur.precision() * 2;
    if (next > kLambdaMaxPrecision) return out;
    auto sd = spectral(spec, next);
    if (!sd.dominant_index) throw HypothesisError("no dominant root");
    cur = solve_coefficients(spec, sd);
  }
}

CBall lambda_full_rearranged(const BinetCoefficients& coeffs, const LambdaInstance& inst) {
  const auto& sd = coeffs.spectral;
  const std::size_t dom = *sd.dominant_index;
  const Precision prec = coeffs.precision();
  CBall main(prec), rest(prec);
  for (unsigned long n : inst.indices) {
    for (std::size_t l = 0; l < sd.t(); ++l) {
      CBall term = coeffs.f(l, n) * pow(sd.roots[l].enclosure, static_cast<long>(n));
      if (l == dom) {
        main = main + term;
      } else {
        rest = rest + term;
      }
    }
  }
  return rest / main;
}

// ---------------------------------------------------------- vanishing forms

VanishingFormReport vanishing_form_threshold(const RecurrenceSpec& spec, const BinetCoefficients& coeffs,
                                  unsigned k, std::optional<std::size_t> conjugate,
                                  IndexWindow growth_window) {
  if (k == 0) throw ValidationError("k must be at least 1");
  const auto& sd = coeffs.spectral;
  if (!sd.dominant_index) throw HypothesisError("no dominant root");
  const std::size_t dom = *sd.dominant_index;
  if (sd.dominant_is_rational_integer) {
    throw HypothesisError("dominant root is a rational integer; it has no distinct conjugate");
  }
  const RootBox& top = sd.roots[dom];
  Ball one = Ball::from_int(1, sd.precision);
  if (!top.is_real || !certainly_less(one, top.enclosure.real())) {
    throw HypothesisError("dominant root is not a real number > 1");
  }
  IntegerPolynomial mp = minimal_polynomial(sd, dom);
  if (mp.degree() == 1) {
    throw HypothesisError("dominant root is rational; it has no distinct conjugate");
  }
  std::vector<std::size_t> conjugates;
  for (std::size_t j = 0; j < sd.t(); ++j) {
    if (j != dom && sd.roots[j].factor_index == top.factor_index &&
        minimal_polynomial(sd, j) == mp) {
      conjugates.push_back(j);
    }
  }
  VanishingFormReport rep;
  if (conjugate) {
    if (std::find(conjugates.begin(), conjugates.end(), *conjugate) == conjugates.end()) {
      throw ValidationError("root " + std::to_string(*conjugate) +
                            " is not a conjugate of the dominant root");
    }
    rep.conjugate_index = *conjugate;
  } else {
    rep.conjugate_index = conjugates.front();
  }
  rep.growth = growth_constants(spec, coeffs, growth_window.lo, growth_window.hi);
  if (!(rep.growth.c4 > 0)) throw HypothesisError("some f_i vanishes on the growth window");
  int max_mult = 1;
  for (const auto& b : sd.roots) max_mult = std::max(max_mult, b.multiplicity);
  rep.c17 = k * rep.growth.c5 / rep.growth.c4;
  rep.c18 = std::max(std::log(rep.c17), 0.0) + (max_mult - 1);
  const double log_alpha = std::log(top.modulus().mid_double());
  Ball cm = sd.roots[rep.conjugate_index].modulus();
  rep.conjugate_outside_unit_circle = !(cm.upper_double() <= 1.0);
  rep.g = rep.conjugate_outside_unit_circle ? log_alpha - std::log(cm.mid_double()) : log_alpha;
  const double Y = std::max(3.0, rep.c18 / rep.g);
  rep.threshold = std::max(3.0, 2 * Y * std::log(Y));
  return rep;
}

// ------------------------------------------------------------ chain report

double binet_height_bound(const RecurrenceSpec& spec, double h_alpha) {
  const std::size_t r = spec.coeffs.size();
  std::vector<mpz_class> h(r);  // coefficient of x^(r-1-j) is d_j
  for (std::size_t j = 0; j < r; ++j) {
    mpz_class d = spec.initial[j];
    for (std::size_t i = 1; i <= j; ++i) d -= spec.coeffs[i - 1] * spec.initial[j - i];
    h[r - 1 - j] = d;
  }
  IntegerPolynomial H(h);
  IntegerPolynomial fp = char_poly(spec).derivative();
  return dlog(H.length()) + H.degree() * h_alpha + dlog(fp.length()) +
         static_cast<double>(r - 1) * h_alpha;
}

LambdaChainReport lambda_chain_report(const RecurrenceSpec& spec, unsigned k,
                                      const LambdaInstance& inst, Precision prec) {
  verify_lambda_instance(spec, inst);
  if (inst.indices.size() != k) {
    throw ValidationError("instance has " + std::to_string(inst.indices.size()) +
                          " indices but k = " + std::to_string(k));
  }
  const SpectralData sd = spectral(spec, std::max(prec, kLambdaStartPrecision));
  if (sd.dominance != Verdict::kYes) {
    if (sd.dominance == Verdict::kUndecided) {
      throw PrecisionError("dominance undecided; increase --precision");
    }
    throw HypothesisError("no dominant root");
  }
  const std::size_t dom = *sd.dominant_index;
  const RootBox& top = sd.roots[dom];
  Ball one = Ball::from_int(1, sd.precision);
  if (!top.is_real || !certainly_less(one, top.enclosure.real())) {
    throw HypothesisError("dominant root is not a real number > 1");
  }
  if (top.multiplicity != 1) throw HypothesisError("dominant root has multiplicity > 1");
  if (sd.dominant_is_rational_integer) throw HypothesisError("dominant root is a rational integer");
  const BinetCoefficients coeffs = solve_coefficients(spec, sd);

  LambdaChainReport rep{.instance = inst};
  rep.instance = inst;
  rep.k = k;
  IntegerPolynomial mp = minimal_polynomial(sd, dom);
  rep.D = mp.degree();
  rep.h_alpha = height_from_minpoly(mp, sd.precision).value();
  rep.h_beta_bound = binet_height_bound(spec, rep.h_alpha);
  const double logM = dlog(inst.M);
  rep.Q = 1;
  for (const auto& p : inst.primes.primes()) rep.Q *= dlog(p);
  rep.logA_bound = std::max(logM + rep.h_beta_bound, 2.0);
  const double log_alpha = std::log(top.modulus().mid_double());
  const double D = rep.D;
  const unsigned long nk = inst.indices.front();
  const std::size_t s = inst.primes.size();

  std::optional<VanishingFormReport> fallback;
  std::optional<double> full_prefactor, full_logA_alpha, full_logA_last;
  std::optional<double> c32;
  for (unsigned level : lambda_levels(k)) {
    LambdaFormRecord f;
    f.level = level;
    f.name = lambda_name(level, k);
    f.corrections = correction_positions(level, k);
    f.lambda = lambda_eval(spec, coeffs, level, inst);
    if (!f.lambda.nonzero) {
      if (!fallback) fallback = vanishing_form_threshold(spec, coeffs, k);
      f.vanishing_form_threshold = fallback->threshold;
      rep.notes.push_back(f.name + " not separated from zero at " +
                          std::to_string(kLambdaMaxPrecision) + " bits");
      rep.forms.push_back(std::move(f));
      continue;
    }
    Ball logabs = log(f.lambda.value.abs());
    f.log_abs = logabs.mid_double();
    f.log_abs_upper = logabs.upper_double();

    CBall gamma(coeffs.precision());
    lambda_at(coeffs, level, inst, &gamma);
    double h_est = logM + rep.h_beta_bound + std::log(f.corrections.size() + 1.0);
    for (unsigned pos : f.corrections) h_est += (nk - index_at(inst, pos)) * rep.h_alpha;
    f.composite_height = h_est;

    std::vector<double> logA, b;
    for (std::size_t j = 0; j < s; ++j) {
      logA.push_back(dlog(inst.primes[j]));
      b.push_back(static_cast<double>(inst.exponents[j]));
    }
    logA.push_back(std::max({rep.h_alpha, log_alpha / D, 0.16 / D}));
    b.push_back(-static_cast<double>(nk));
    logA.push_back(std::max({h_est, abs_log(gamma) / D, 0.16 / D}));
    b.push_back(1);
    f.matveev = MatveevInstance{static_cast<int>(s) + 2, D, logA, matveev_B(b, logA)};
    f.matveev_lower = matveev_bound(f.matveev);
    if (f.log_abs_upper < f.matveev_lower) {
      throw InternalError(f.name + ": measured log|Lambda| = " + std::to_string(f.log_abs) +
                          " is below the Matveev bound " + std::to_string(f.matveev_lower));
    }

    const double log_nk = std::log(static_cast<double>(nk));
    if (level == k && sd.t() >= 2) {
      f.constant_name = "c32";
      double ratio = sd.roots[dom == 0 ? 1 : 0].modulus().mid_double() / top.modulus().mid_double();
      double log_c = f.log_abs - spec.order() * log_nk - nk * std::log(ratio);
      f.constant = std::exp(log_c);
      c32 = f.constant;
      full_prefactor = -matveev_prefactor(f.matveev);
      full_logA_alpha = logA[s];
      full_logA_last = logA[s + 1];
    } else if (level < k && nk >= 2) {
      unsigned gap_pos = level == 1 ? k - 1 : level - 1;
      double gap = static_cast<double>(nk - index_at(inst, gap_pos));
      f.constant_name = level == 1 ? "c23" : "c28";
      f.constant = -f.log_abs / (gap * log_nk);
    }
    f.constant_positive = f.constant && *f.constant > 0;
    rep.forms.push_back(std::move(f));
  }

  CBall rearranged = lambda_full_rearranged(coeffs, inst);
  const LambdaFormRecord& full = rep.forms.back();
  rep.rearranged_agrees = !full.lambda.nonzero
                              ? rearranged.contains_zero()
                              : full.lambda.value.overlaps(rearranged);

  if (c32 && full_prefactor && *c32 > 0) {
    const double g = log_alpha - std::log(sd.roots[dom == 0 ? 1 : 0].modulus().mid_double());
    const double C = *full_prefactor;
    const double c24 = std::max({log_alpha, *full_logA_alpha, *full_logA_last}) / *full_logA_last;
    const double a = (std::log(*c32) + C * (1 + std::log(c24) + std::log(2.0))) / g;
    const double bcoef = (spec.order() + C) / g;
    const double Y = std::max(3.0, 2 * bcoef);
    rep.nk_ceiling = std::max({3.0, 2 * a, 2 * Y * std::log(Y)});
  } else {
    rep.notes.push_back("n_k ceiling unavailable (needs a measured positive c32)");
  }
  return rep;
}

nlohmann::ordered_json to_json(const LambdaChainReport& rep) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json inst;
  inst["indices"] = rep.instance.indices;
  inst["primes"] = rep.instance.primes.to_string();
  inst["exponents"] = rep.instance.exponents;
  inst["M"] = rep.instance.M.get_str();
  inst["value"] = rep.instance.value.get_str();
  j["instance"] = inst;
  j["k"] = rep.k;
  j["D"] = rep.D;
  j["Q"] = rep.Q;
  j["log_A"] = rep.logA_bound;
  j["h_alpha"] = rep.h_alpha;
  j["h_f1_upper"] = rep.h_beta_bound;
  j["forms"] = nlohmann::ordered_json::array();
  for (const auto& f : rep.forms) {
    nlohmann::ordered_json fj;
    fj["name"] = f.name;
    fj["level"] = f.level;
    fj["corrections"] = f.corrections;
    fj["nonzero"] = f.lambda.nonzero;
    fj["precision"] = f.lambda.precision;
    fj["abs_lambda"] = f.lambda.value.abs().to_string(12);
    if (f.lambda.nonzero) {
      fj["log_abs_lambda"] = f.log_abs;
      fj["matveev_m"] = f.matveev.m;
      fj["matveev_D"] = f.matveev.D;
      fj["matveev_logA"] = f.matveev.logA;
      fj["matveev_B"] = f.matveev.B;
      fj["matveev_lower"] = f.matveev_lower;
      fj["matveev_holds"] = f.log_abs_upper >= f.matveev_lower;
      fj["composite_height_upper"] = f.composite_height;
    }
    if (f.constant) {
      fj["constant"] = f.constant_name;
      fj["constant_value"] = *f.constant;
      fj["constant_positive"] = f.constant_positive;
    }
    if (f.vanishing_form_threshold) fj["vanishing_form_threshold"] = *f.vanishing_form_threshold;
    j["forms"].push_back(fj);
  }
  j["rearranged_full_form_agrees"] = rep.rearranged_agrees;
  j["n_k_ceiling"] = rep.nk_ceiling;
  j["notes"] = rep.notes;
  return j;
}

// ------------------------------------------------------- solution counting

SUnitCountBound sunit_count_log_bound(unsigned long s, unsigned long d, unsigned long M) {
  if (s < 1 || d < 1 || M < 1) throw ValidationError("s, d and M must all be at least 1");
  SUnitCountBound out;
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), d);
  out.exponent = 36 * mpz_class(M) * fact;
  const Precision prec = 128;
  Real base(prec), tail(prec), ten(prec);
  mpz_class inner = 4 * mpz_class(s) * fact;
  mpfr_set_z(base.get(), inner.get_mpz_t(), MPFR_RNDN);
  mpfr_log10(base.get(), base.get(), MPFR_RNDN);
  mpfr_set_ui(tail.get(), s, MPFR_RNDN);
  mpfr_log10(tail.get(), tail.get(), MPFR_RNDN);
  mpfr_mul_ui(tail.get(), tail.get(), 6, MPFR_RNDN);

  // 2^E stays inside MPFR's exponent range well past double overflow.
  if (out.exponent > mpz_class(1UL << 29)) {
    out.overflow = true;
    out.log10_bound = std::numeric_limits<double>::infinity();
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "%.10Rg", base.get());
    out.log10_text = "2^" + out.exponent.get_str() + " * " + buf;
    return out;
  }
  Real value(prec);
  mpfr_mul_2ui(value.get(), base.get(), out.exponent.get_ui(), MPFR_RNDN);
  mpfr_add(value.get(), value.get(), tail.get(), MPFR_RNDN);
  out.log10_bound = value.to_double();
  out.overflow = std::isinf(out.log10_bound);
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, "%.12Re", value.get());
  out.log10_text = buf;
  return out;
}

}  // namespace spartlab
