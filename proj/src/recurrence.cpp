#include "spartlab/recurrence.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "spartlab/errors.hpp"

namespace spartlab {

namespace {

mpz_class json_integer(const nlohmann::json& v, const char* field) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return mpz_class(std::to_string(v.get<unsigned long long>()));
    return mpz_class(std::to_string(v.get<long long>()));
  }
  if (v.is_string()) {
    try {
      return mpz_class(v.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw ValidationError(std::string("spec field '") + field + "' must hold integers");
}

nlohmann::ordered_json integer_json(const mpz_class& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) return v.get_si();
  return v.get_str();
}

// Ball-exact check that -roots[a] is roots[b], using gcd(f(x), f(-x)).
bool negation_pair(const IntegerPolynomial& sqfree, const std::vector<RootBox>& roots,
                   std::size_t a, std::size_t b, Precision prec) {
  if (!roots[a].is_real || !roots[b].is_real) return false;
  IntegerPolynomial h = gcd(sqfree, sqfree.reflect());
  if (h.degree() < 1) return false;
  auto unique_overlap = [&](const CBall& z) -> std::optional<std::size_t> {
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (roots[i].enclosure.overlaps(z)) {
        if (hit) return std::nullopt;
        hit = i;
      }
    }
    return hit;
  };
  for (const auto& hb : isolate_roots(h, prec)) {
    if (unique_overlap(hb.enclosure) != a) continue;
    // hb holds alpha_a and -alpha_a is also a root of f.
    return unique_overlap(-roots[a].enclosure) == b;
  }
  return false;
}

void decide_dominance(SpectralData& sd, const IntegerPolynomial& sqfree) {
  sd.dominant_index.reset();
  sd.dominant_margin.reset();
  const auto& roots = sd.roots;
  if (roots.size() == 1) {
    sd.dominance = Verdict::kYes;
    sd.dominant_index = 0;
    sd.dominant_margin = roots[0].modulus();
    return;
  }
  Ball top = roots[0].modulus();
  Ball rest = roots[1].modulus();
  bool strict = true, explained = true;
  for (std::size_t j = 1; j < roots.size(); ++j) {
    Ball mj = roots[j].modulus();
    rest = max(rest, mj);
    if (certainly_less(mj, top)) continue;
    strict = false;
    if (roots[0].conjugate == j) continue;
    if (negation_pair(sqfree, roots, 0, j, sd.precision)) continue;
    explained = false;
  }
  if (strict) {
    sd.dominance = Verdict::kYes;
    sd.dominant_index = 0;
    sd.dominant_margin = top - rest;
  } else {
    sd.dominance = explained ? Verdict::kNo : Verdict::kUndecided;
  }
}

void decide_degeneracy(SpectralData& sd, const IntegerPolynomial& sqfree) {
  const int d = sqfree.degree();
  sd.degenerate = Verdict::kNo;
  sd.witness.reset();
  if (d < 2) return;
  IntegerPolynomial ratios = root_ratio_polynomial(sqfree);
  const unsigned long field_degree = static_cast<unsigned long>(d) * (d - 1);
  // phi(n) >= sqrt(n / 2), so orders beyond 2 D^2 cannot qualify.
  const unsigned long n_max = 2 * field_degree * field_degree + 2;
  for (unsigned long n = 2; n <= n_max; ++n) {
    if (euler_phi(n) > field_degree) continue;
    if (!exact_quotient(ratios, cyclotomic(static_cast<unsigned>(n)))) continue;
    sd.degenerate = Verdict::kYes;
    DegeneracyWitness w;
    w.order = static_cast<unsigned>(n);
    CBall one = CBall::from_int(1, sd.precision);
    for (std::size_t i = 0; i < sd.roots.size() && !w.i; ++i) {
      for (std::size_t j = 0; j < sd.roots.size(); ++j) {
        if (i == j) continue;
        try {
          CBall q = pow(sd.roots[i].enclosure / sd.roots[j].enclosure, static_cast<long>(n));
          if ((q - one).contains_zero()) {
            w.i = i;
            w.j = j;
            break;
          }
        } catch (const PrecisionError&) {
        }
      }
    }
    sd.witness = w;
    return;
  }
}

void decide_integer_dominant(SpectralData& sd) {
  sd.dominant_is_rational_integer = false;
  sd.dominant_integer.reset();
  if (!sd.dominant_index) return;
  const RootBox& b = sd.roots[*sd.dominant_index];
  if (!b.is_real) return;
  Real rounded(b.enclosure.precision());
  mpfr_round(rounded.get(), b.enclosure.re().get());
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), rounded.get(), MPFR_RNDN);
  if (z == 0 || sd.poly.eval(z) != 0) return;
  if (!mpz_divisible_p(sd.poly.coeff(0).get_mpz_t(), z.get_mpz_t())) return;
  if (!b.enclosure.real().contains(rounded)) return;
  sd.dominant_is_rational_integer = true;
  sd.dominant_integer = z;
}

}  // namespace

void RecurrenceSpec::validate() const {
  if (coeffs.empty()) throw ValidationError("recurrence order must be at least 1");
  if (initial.size() != coeffs.size()) {
    throw ValidationError("need exactly " + std::to_string(coeffs.size()) +
                          " initial terms, got " + std::to_string(initial.size()));
  }
  if (coeffs.back() == 0) throw ValidationError("a_r must be nonzero");
  if (std::all_of(initial.begin(), initial.end(), [](const mpz_class& v) { return v == 0; })) {
    throw ValidationError("initial terms must not all be zero");
  }
}

RecurrenceSpec make_spec(std::string name, std::vector<long> coeffs,
                         std::vector<long> initial) {
  RecurrenceSpec s;
  s.name = std::move(name);
  for (long c : coeffs) s.coeffs.emplace_back(c);
  for (long u : initial) s.initial.emplace_back(u);
  s.validate();
  return s;
}

RecurrenceSpec preset(const std::string& name) {
  if (name == "fibonacci") return make_spec(name, {1, 1}, {0, 1});
  if (name == "lucas") return make_spec(name, {1, 1}, {2, 1});
  if (name == "pell") return make_spec(name, {2, 1}, {0, 1});
  if (name == "tribonacci") return make_spec(name, {1, 1, 1}, {0, 0, 1});
  throw ValidationError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"fibonacci", "lucas", "pell", "tribonacci"}; }

RecurrenceSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("spec must be a JSON object");
  RecurrenceSpec s;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ValidationError("spec field 'name' must be a string");
    s.name = j["name"].get<std::string>();
  }
  for (const char* field : {"coeffs", "initial"}) {
    if (!j.contains(field) || !j[field].is_array()) {
      throw ValidationError(std::string("spec needs an array field '") + field + "'");
    }
  }
  for (const auto& v : j["coeffs"]) s.coeffs.push_back(json_integer(v, "coeffs"));
  for (const auto& v : j["initial"]) s.initial.push_back(json_integer(v, "initial"));
  s.validate();
  return s;
}

nlohmann::ordered_json spec_to_json(const RecurrenceSpec& spec) {
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  j["coeffs"] = nlohmann::ordered_json::array();
  for (const auto& c : spec.coeffs) j["coeffs"].push_back(integer_json(c));
  j["initial"] = nlohmann::ordered_json::array();
  for (const auto& u : spec.initial) j["initial"].push_back(integer_json(u));
  return j;
}

RecurrenceSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spec file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed spec JSON in '" + path + "': " + e.what());
  }
  return spec_from_json(j);
}

// ------------------------------------------------------------------ terms

TermIterator::TermIterator(const RecurrenceSpec& spec)
    : coeffs_(spec.coeffs), window_(spec.initial) {
  spec.validate();
}

TermIterator& TermIterator::operator++() {
  const std::size_t r = coeffs_.size();
  ++index_;
  if (index_ < r) {
    pos_ = index_;
    return *this;
  }
  // The slot of U_{n-r} is about to be overwritten by U_n.
  const std::size_t oldest = index_ % r;
  mpz_class next = 0;
  for (std::size_t i = 1; i <= r; ++i) {
    next += coeffs_[i - 1] * window_[(index_ - i) % r];
  }
  window_[oldest] = std::move(next);
  pos_ = oldest;
  return *this;
}

mpz_class term(const RecurrenceSpec& spec, unsigned long n) {
  TermIterator it(spec);
  while (it.index() < n) ++it;
  return *it;
}

std::vector<mpz_class> terms(const RecurrenceSpec& spec, unsigned long n) {
  std::vector<mpz_class> out;
  out.reserve(n + 1);
  TermIterator it(spec);
  out.push_back(*it);
  while (it.index() < n) {
    ++it;
    out.push_back(*it);
  }
  return out;
}

IntegerPolynomial char_poly(const RecurrenceSpec& spec) {
  spec.validate();
  const std::size_t r = spec.coeffs.size();
  std::vector<mpz_class> c(r + 1);
  c[r] = 1;
  for (std::size_t i = 1; i <= r; ++i) c[r - i] = -spec.coeffs[i - 1];
  return IntegerPolynomial(std::move(c));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kNo: return "no";
    case Verdict::kYes: return "yes";
    case Verdict::kUndecided: return "undecided";
  }
  return "undecided";
}

// --------------------------------------------------------------- spectral

const RootBox& SpectralData::dominant() const {
  if (!dominant_index) throw HypothesisError("no dominant root");
  return roots[*dominant_index];
}

SpectralData spectral(const IntegerPolynomial& poly, Precision prec) {
  if (poly.degree() < 1) throw ValidationError("spectral analysis needs degree >= 1");
  const IntegerPolynomial sqfree = squarefree_part(poly);
  SpectralData sd;
  sd.poly = poly;
  for (Precision p = std::max<Precision>(prec, 32);; p *= 2) {
    sd.roots = isolate_roots(poly, p);
    sd.precision = std::max(p, sd.roots.front().enclosure.precision());
    decide_dominance(sd, sqfree);
    if (sd.dominance != Verdict::kUndecided || p >= kMaxPrecision) break;
  }
  decide_degeneracy(sd, sqfree);
  decide_integer_dominant(sd);
  return sd;
}

SpectralData spectral(const RecurrenceSpec& spec, Precision prec) {
  return spectral(char_poly(spec), prec);
}

IntegerPolynomial minimal_polynomial(const SpectralData& sd, std::size_t index) {
  if (!sd.poly.is_monic()) throw ValidationError("minimal polynomial needs a monic input");
  const RootBox& target = sd.roots.at(index);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < sd.roots.size(); ++i) {
    if (i != index && sd.roots[i].factor_index == target.factor_index) pool.push_back(i);
  }
  const Precision prec = target.enclosure.precision();
  Real half(kRadiusPrecision);
  mpfr_set_d(half.get(), 0.5, MPFR_RNDN);

  // Integer polynomial whose coefficients are the unique integers inside the
  // enclosures of prod (x - z_i); nullopt if some coefficient is ambiguous.
  auto round_product = [&](const std::vector<std::size_t>& subset)
      -> std::optional<IntegerPolynomial> {
    std::vector<CBall> c{CBall::from_int(1, prec)};
    for (std::size_t i : subset) {
      std::vector<CBall> next(c.size() + 1, CBall(prec));
      for (std::size_t k = 0; k < c.size(); ++k) {
        next[k + 1] = next[k + 1] + c[k];
        next[k] = next[k] - c[k] * sd.roots[i].enclosure;
      }
      c = std::move(next);
    }
    std::vector<mpz_class> ints;
    for (const auto& coeff : c) {
      if (!mpfr_less_p(coeff.rad().get(), half.get())) return std::nullopt;
      if (!coeff.imag().contains_zero()) return std::nullopt;
      Real rounded(prec);
      mpfr_round(rounded.get(), coeff.re().get());
      if (!coeff.real().contains(rounded)) return std::nullopt;
      mpz_class z;
      mpfr_get_z(z.get_mpz_t(), rounded.get(), MPFR_RNDN);
      ints.push_back(z);
    }
    return IntegerPolynomial(std::move(ints));
  };

  for (std::size_t extra = 0; extra <= pool.size(); ++extra) {
    std::vector<bool> pick(pool.size(), false);
    std::fill(pick.begin(), pick.begin() + extra, true);
    do {
      std::vector<std::size_t> subset{index};
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (pick[k]) subset.push_back(pool[k]);
      }
      bool closed = std::all_of(subset.begin(), subset.end(), [&](std::size_t i) {
        const auto& cj = sd.roots[i].conjugate;
        return !cj || std::find(subset.begin(), subset.end(), *cj) != subset.end();
      });
      if (!closed) continue;
      auto h = round_product(subset);
      if (!h || !exact_quotient(sd.poly, *h)) continue;
      // h divides f, so its roots are roots of f; they are exactly the
      // subset once every other root is certified not to be a root of h.
      bool exact = true;
      for (std::size_t i = 0; i < sd.roots.size() && exact; ++i) {
        if (std::find(subset.begin(), subset.end(), i) != subset.end()) continue;
        if (h->eval(sd.roots[i].enclosure).contains_zero()) exact = false;
      }
      if (exact) return *h;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  throw PrecisionError("minimal polynomial of a root not recovered at " +
                       std::to_string(prec) + " bits");
}

IndependenceReport multiplicative_independence(const SpectralData& sd) {
  if (sd.t() < 2) throw ValidationError("multiplicative independence needs t >= 2");
  IndependenceReport rep;
  Ball one = Ball::from_int(1, sd.precision);
  rep.hypothesis_met = certainly_less(one, sd.roots[0].modulus());
  for (std::size_t j = 1; j < sd.t() && rep.hypothesis_met; ++j) {
    if (!certainly_less(sd.roots[j].modulus(), one)) rep.hypothesis_met = false;
  }
  if (!rep.hypothesis_met) return rep;
  if (sd.t() == 2) {
    // alpha_1 alpha_2 = c_0 / c_2 of the (quadratic) squarefree part.
    IntegerPolynomial q = squarefree_part(sd.poly);
    rep.product_modulus_one = abs(q.coeff(0)) == abs(q.coeff(2));
    rep.pairs.push_back({0, 1, !rep.product_modulus_one});
    return rep;
  }
  for (std::size_t i = 0; i < sd.t(); ++i) {
    for (std::size_t j = i + 1; j < sd.t(); ++j) rep.pairs.push_back({i, j, true});
  }
  return rep;
}

std::vector<unsigned long> zero_multiplicity_scan(const RecurrenceSpec& spec,
                                                  unsigned long n_max) {
  std::vector<unsigned long> zeros;
  TermIterator it(spec);
  while (true) {
    if (*it == 0) zeros.push_back(it.index());
    if (it.index() >= n_max) break;
    ++it;
  }
  return zeros;
}

}  // namespace spartlab
