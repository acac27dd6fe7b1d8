#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spartlab/baker.hpp"
#include "spartlab/binet.hpp"
#include "spartlab/errors.hpp"
#include "spartlab/ksum.hpp"
#include "spartlab/recurrence.hpp"
#include "spartlab/sint.hpp"
#include "spartlab/theorems.hpp"

using namespace spartlab;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string command;
  std::string preset = "fibonacci";
  std::string spec_path;
  Precision precision = 128;
  std::uint64_t seed = 0x5eed;
  std::string out, plot_data;

  unsigned k = 2;
  std::string primes = "2,3";
  std::string window = "1:60";
  std::string mode = "at-most-k";
  unsigned long from = 0, to = 20;
  std::size_t limit = 0;
  double eps = 0.1;
  unsigned long j0 = 50;
  std::string indices;
  std::string n;
  std::uint32_t trial_bound = 1'000'000;
  std::uint64_t rho_iterations = 2'000'000;

  bool sunit = false, matveev = false, height = false, force_mahler = false;
  unsigned long s = 1, d = 1, M = 1;
  int m = 2;
  double D = 1, B = 1;
  std::string logA, poly;
};

std::vector<std::string> split(const std::string& text, const std::string& seps) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (seps.find(c) != std::string::npos) {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

mpz_class parse_int(const std::string& text, const std::string& what) {
  mpz_class v;
  if (text.empty() || v.set_str(text, 10) != 0) {
    throw ValidationError(what + ": '" + text + "' is not an integer");
  }
  return v;
}

unsigned long parse_ulong(const std::string& text, const std::string& what) {
  mpz_class v = parse_int(text, what);
  if (v < 0 || !v.fits_ulong_p()) throw ValidationError(what + ": '" + text + "' out of range");
  return v.get_ui();
}

IndexWindow parse_window(const std::string& text) {
  auto parts = split(text, ":");
  if (parts.size() != 2) throw ValidationError("window must look like lo:hi, got '" + text + "'");
  IndexWindow w{parse_ulong(parts[0], "window"), parse_ulong(parts[1], "window")};
  if (w.hi < w.lo) throw ValidationError("window '" + text + "' is empty");
  return w;
}

PrimeSet parse_primes(const std::string& text) {
  std::vector<mpz_class> ps;
  for (const auto& p : split(text, ",")) ps.push_back(parse_int(p, "primes"));
  return PrimeSet(std::move(ps));
}

RecurrenceSpec resolve_spec(const Options& o) {
  return o.spec_path.empty() ? preset(o.preset) : load_spec(o.spec_path);
}

Json base_config(const Options& o, const RecurrenceSpec& spec) {
  Json c;
  c["command"] = o.command;
  c["source"] = o.spec_path.empty() ? "preset:" + o.preset : o.spec_path;
  c["spec"] = spec_to_json(spec);
  c["precision"] = o.precision;
  c["seed"] = o.seed;
  return c;
}

void add_ksum_config(Json& c, const Options& o) {
  c["k"] = o.k;
  c["window"] = o.window;
  c["mode"] = o.mode;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

void emit_json(const Options& o, const Json& config, const Json& result) {
  Json doc;
  doc["tool"] = "spartlab";
  doc["version"] = kVersion;
  doc["config"] = config;
  doc["result"] = result;
  write_text(o.out, doc.dump(2) + "\n");
}

std::string csv_header(const Json& config) {
  return std::string("# spartlab ") + kVersion + "\n# config: " + config.dump() + "\n";
}

void emit_plot(const Options& o, const Json& config, const std::string& columns,
               const std::string& body) {
  if (o.plot_data.empty()) return;
  write_text(o.plot_data, csv_header(config) + "# " + columns + "\n" + body);
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json hypotheses_json(const std::vector<HypothesisCheck>& checks) {
  Json j;
  bool all = true;
  Json list = Json::array();
  for (const auto& h : checks) {
    list.push_back({{"name", h.name}, {"passed", h.passed}});
    all = all && h.passed;
  }
  j["status"] = all ? "pass" : "fail";
  j["checks"] = list;
  return j;
}

// ------------------------------------------------------------ subcommands

void cmd_terms(const Options& o) {
  auto spec = resolve_spec(o);
  if (o.to < o.from) throw ValidationError("--to must not be below --from");
  Json c = base_config(o, spec);
  c["from"] = o.from;
  c["to"] = o.to;
  std::ostringstream out;
  out << csv_header(c) << "n,U_n\n";
  TermIterator it(spec);
  for (unsigned long i = 0; i <= o.to; ++i, ++it) {
    if (i >= o.from) out << i << ',' << (*it).get_str() << '\n';
  }
  write_text(o.out, out.str());
}

void cmd_spectral(const Options& o) {
  auto spec = resolve_spec(o);
  Json c = base_config(o, spec);
  SpectralData sd = spectral(spec, o.precision);
  Json r;
  r["char_poly"] = sd.poly.to_string();
  r["certified_precision"] = sd.precision;
  Json roots = Json::array();
  for (const auto& box : sd.roots) {
    roots.push_back({{"re", box.enclosure.re().to_string(20)},
                     {"im", box.enclosure.im().to_string(20)},
                     {"radius", box.enclosure.rad().to_string(3)},
                     {"modulus", box.modulus().mid().to_string(20)},
                     {"multiplicity", box.multiplicity},
                     {"real", box.is_real}});
  }
  r["roots"] = roots;
  r["dominant"] = to_string(sd.dominance);
  if (sd.dominant_index) {
    r["dominant_root"] = sd.roots[*sd.dominant_index].enclosure.re().to_string(20);
    if (sd.dominant_margin) r["dominant_margin"] = sd.dominant_margin->mid().to_string(12);
  }
  r["degenerate"] = to_string(sd.degenerate);
  if (sd.witness) {
    Json w;
    w["order"] = sd.witness->order;
    if (sd.witness->i) w["i"] = *sd.witness->i;
    if (sd.witness->j) w["j"] = *sd.witness->j;
    r["degeneracy_witness"] = w;
  }
  r["dominant_is_rational_integer"] = sd.dominant_is_rational_integer;
  if (sd.dominant_integer) r["dominant_integer"] = sd.dominant_integer->get_str();
  r["thm1_hypotheses"] = hypotheses_json(growth_hypotheses(sd));
  r["thm2_hypotheses"] = hypotheses_json(gap_hypotheses(sd));
  emit_json(o, c, r);
  if (sd.dominance == Verdict::kUndecided || sd.degenerate == Verdict::kUndecided) {
    throw PrecisionError("spectral verdict undecided at " + std::to_string(sd.precision) +
                         " bits; increase --precision");
  }
}

void cmd_ksums(const Options& o) {
  auto spec = resolve_spec(o);
  Json c = base_config(o, spec);
  add_ksum_config(c, o);
  c["limit"] = o.limit;
  IndexWindow w = parse_window(o.window);
  KSumStream stream(spec, o.k, w, parse_mode(o.mode));
  std::vector<KSumRecord> records;
  while (o.limit == 0 || records.size() < o.limit) {
    auto rec = stream.next();
    if (!rec) break;
    records.push_back(std::move(*rec));
  }
  std::string head = csv_header(c) + "# stability_bound: " + stream.stability_bound().get_str() +
                     " guard_certified: " + (stream.guard_certified() ? "yes" : "no") + "\n";
  write_text(o.out, head + ksum_csv(records));
}

std::vector<SPartSeriesRecord> series_for(const Options& o, const RecurrenceSpec& spec,
                                          Json& c) {
  add_ksum_config(c, o);
  PrimeSet primes = parse_primes(o.primes);
  c["primes"] = primes.to_string();
  return exponent_series(spec, o.k, primes, parse_window(o.window), parse_mode(o.mode));
}

void cmd_exponents(const Options& o) {
  auto spec = resolve_spec(o);
  Json c = base_config(o, spec);
  auto series = series_for(o, spec, c);
  write_text(o.out, csv_header(c) + series_csv(series));
  std::ostringstream plot;
  for (const auto& s : series) plot << s.rank << ' ' << fixed(s.exponent) << '\n';
  emit_plot(o, c, "j exponent", plot.str());
}

Json thm1_json(const Thm1Report& rep) {
  Json r;
  r["verdict"] = to_string(rep.verdict);
  r["global_max"] = rep.global_max;
  r["tail_max"] = rep.tail_max;
  r["first_quartile_max"] = rep.first_quartile_max;
  r["last_quartile_max"] = rep.last_quartile_max;
  Json bands = Json::array();
  for (const auto& b : rep.bands) {
    bands.push_back({{"band", b.band}, {"max_exponent", b.max_exponent}, {"count", b.count}});
  }
  r["bands"] = bands;
  return r;
}

void cmd_thm1(const Options& o) {
  auto spec = resolve_spec(o);
  Json c = base_config(o, spec);
  auto series = series_for(o, spec, c);
  Thm1Report rep = verify_thm1(series);
  Json r = thm1_json(rep);
  r["records"] = series.size();
  r["adversarial_self_test"] = to_string(verify_thm1(adversarial_series()).verdict);
  emit_json(o, c, r);
  std::ostringstream plot;
  for (const auto& b : rep.bands) plot << b.band << ' ' << fixed(b.max_exponent) << '\n';
  emit_plot(o, c, "band max_exponent", plot.str());
}

void cmd_thm2(const Options& o) {
  auto spec = resolve_spec(o);
  Json c = base_config(o, spec);
  auto series = series_for(o, spec, c);
  c["j0"] = o.j0;
  Thm2Report rep = verify_thm2(spec, series, o.j0, o.precision);
  Json r;
  r["hypotheses"] = hypotheses_json(rep.hypotheses);
  r["tail_size"] = rep.tail_size;
  r["tail_max"] = rep.tail_max;
  r["c_hat"] = rep.c_hat;
  r["c_hat_positive"] = rep.positive;
  r["c2_proxy"] = rep.c2_proxy;
  emit_json(o, c, r);
}

void cmd_thm3(const Options& o) {
  auto spec = resolve_spec(o);
  Json c = base_config(o, spec);
  add_ksum_config(c, o);
  c["eps"] = o.eps;
  c["trial_bound"] = o.trial_bound;
  c["rho_iterations"] = o.rho_iterations;
  FactorOptions fo;
  fo.trial_bound = o.trial_bound;
  fo.rho_iterations = o.rho_iterations;
  fo.seed = o.seed;
  Thm3Report rep =
      verify_thm3(spec, o.k, parse_window(o.window), o.eps, parse_mode(o.mode), fo);
  Json r;
  r["domain_threshold"] = rep.threshold.get_str();
  r["records"] = rep.rows.size();
  r["in_domain"] = rep.in_domain;
  r["violations"] = rep.violations;
  r["unresolved"] = rep.unresolved;
  r["vacuous"] = rep.vacuous;
  Json rows = Json::array();
  std::ostringstream plot;
  for (const auto& row : rep.rows) {
    if (row.tag == "domain") continue;
    rows.push_back({{"rank", row.rank},
                    {"value", row.value.get_str()},
                    {"witness", to_string(row.witness)},
                    {"tag", row.tag},
                    {"lpf", row.lpf.get_str()},
                    {"rhs", row.rhs}});
    plot << row.value.get_str() << ' ' << row.lpf.get_str() << ' ' << fixed(row.rhs) << '\n';
  }
  r["rows"] = rows;
  emit_json(o, c, r);
  emit_plot(o, c, "value lpf rhs", plot.str());
}

void cmd_delta(const Options& o) {
  auto spec = resolve_spec(o);
  Json c = base_config(o, spec);
  PrimeSet primes = parse_primes(o.primes);
  c["primes"] = primes.to_string();
  DeltaReport rep = delta(spec, primes, o.precision);
  Json r;
  r["delta"] = rep.delta;
  r["exactly_zero"] = rep.exactly_zero;
  r["log_max_modulus"] = rep.log_max_modulus;
  Json per = Json::array();
  for (const auto& p : rep.primes) {
    per.push_back({{"prime", p.prime.get_str()}, {"min_valuation", p.min_valuation.get_str()}});
  }
  r["primes"] = per;
  r["gcd"] = rep.gcd_value.get_str();
  r["gcd_condition"] = rep.gcd_condition ? "pass" : "fail";
  r["consistent"] = rep.consistent;
  emit_json(o, c, r);
}

void cmd_lambda_chain(const Options& o) {
  auto spec = resolve_spec(o);
  Json c = base_config(o, spec);
  PrimeSet primes = parse_primes(o.primes);
  c["primes"] = primes.to_string();
  c["indices"] = o.indices;
  IndexTuple idx;
  for (const auto& part : split(o.indices, ";,")) idx.push_back(parse_ulong(part, "indices"));
  std::sort(idx.rbegin(), idx.rend());
  LambdaInstance inst = make_lambda_instance(spec, idx, primes);
  auto rep = lambda_chain_report(spec, static_cast<unsigned>(idx.size()), inst,
                                 std::max<Precision>(o.precision, kLambdaStartPrecision));
  emit_json(o, c, to_json(rep));
}

void cmd_uary(const Options& o) {
  auto spec = resolve_spec(o);
  Json c = base_config(o, spec);
  c["n"] = o.n;
  mpz_class n = parse_int(o.n, "--n");
  UaryExpansion e = uary_expand(n, spec);
  Json r;
  r["base_start"] = e.base_start;
  Json digits = Json::array();
  for (const auto& dgt : e.digits) digits.push_back(dgt.get_str());
  r["digits"] = digits;
  Json used = Json::array();
  for (std::size_t j = e.digits.size(); j-- > 0;) {
    if (e.digits[j] != 0) used.push_back({{"index", j}, {"digit", e.digits[j].get_str()}});
  }
  r["terms"] = used;
  r["zeckendorf_valid"] = e.zeckendorf_valid;
  r["reconstructs"] = uary_value(e, spec) == n;
  emit_json(o, c, r);
}

void cmd_bounds(const Options& o) {
  Json c;
  c["command"] = o.command;
  c["precision"] = o.precision;
  c["seed"] = o.seed;
  Json r;
  if (o.sunit + o.matveev + o.height != 1) {
    throw ValidationError("choose exactly one of --sunit-count, --matveev, --height");
  }
  if (o.sunit) {
    c["s"] = o.s;
    c["d"] = o.d;
    c["M"] = o.M;
    auto b = sunit_count_log_bound(o.s, o.d, o.M);
    r["kind"] = "sunit-count";
    r["log10_bound"] = b.log10_text;
    r["overflow"] = b.overflow;
    r["tower_exponent"] = b.exponent.get_str();
  } else if (o.matveev) {
    MatveevInstance inst;
    inst.m = o.m;
    inst.D = o.D;
    inst.B = o.B;
    for (const auto& part : split(o.logA, ",")) {
      try {
        inst.logA.push_back(std::stod(part));
      } catch (const std::exception&) {
        throw ValidationError("--logA: '" + part + "' is not a number");
      }
    }
    if (inst.logA.size() != static_cast<std::size_t>(inst.m)) {
      throw ValidationError("--logA needs exactly m values");
    }
    c["m"] = o.m;
    c["D"] = o.D;
    c["logA"] = o.logA;
    c["B"] = o.B;
    r["kind"] = "matveev";
    r["log_lower_bound"] = matveev_bound(inst);
    r["prefactor"] = matveev_prefactor(inst);
  } else {
    std::vector<mpz_class> coeffs;
    for (const auto& part : split(o.poly, ",")) coeffs.push_back(parse_int(part, "--poly"));
    std::reverse(coeffs.begin(), coeffs.end());
    IntegerPolynomial p(coeffs);
    c["poly"] = o.poly;
    c["force_mahler"] = o.force_mahler;
    auto h = height_from_minpoly(p, o.precision, o.force_mahler);
    r["kind"] = "height";
    r["poly"] = p.to_string();
    r["height"] = h.enclosure.mid().to_string(15);
    r["radius"] = h.enclosure.rad().to_string(3);
    r["method"] = to_string(h.method);
    r["minimal"] = h.minimal;
    if (!h.note.empty()) r["note"] = h.note;
  }
  emit_json(o, c, r);
}

void cmd_zeros(const Options& o) {
  auto spec = resolve_spec(o);
  Json c = base_config(o, spec);
  c["to"] = o.to;
  Json r;
  r["zero_indices"] = zero_multiplicity_scan(spec, o.to);
  emit_json(o, c, r);
}

void cmd_vanishing(const Options& o) {
  auto spec = resolve_spec(o);
  Json c = base_config(o, spec);
  c["k"] = o.k;
  c["window"] = o.window;
  auto hits = vanishing_subsum_scan(spec, o.k, parse_window(o.window));
  Json list = Json::array();
  for (const auto& h : hits) {
    list.push_back({{"tuple", to_string(h.tuple)}, {"subset", to_string(h.subset)}});
  }
  Json r;
  r["hits"] = list;
  r["count"] = hits.size();
  emit_json(o, c, r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spartlab: S-parts of sums of linear recurrence terms"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    auto* pre = sub->add_option("--preset", o.preset, "fibonacci | lucas | pell | tribonacci")
                    ->capture_default_str();
    auto* sp = sub->add_option("--spec", o.spec_path, "JSON spec file");
    pre->excludes(sp);
    sub->add_option("--precision", o.precision, "working precision in bits")
        ->envname("SPARTLAB_PRECISION")
        ->check(CLI::Range(53, 1024))
        ->capture_default_str();
    sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
    sub->add_option("--out", o.out, "output file (default stdout)");
  };
  auto ksum_opts = [&](CLI::App* sub) {
    sub->add_option("--k", o.k, "number of summands")->capture_default_str();
    sub->add_option("--window", o.window, "index window lo:hi")->capture_default_str();
    sub->add_option("--mode", o.mode, "at-most-k | exactly-k")->capture_default_str();
  };
  auto primes_opt = [&](CLI::App* sub) {
    sub->add_option("--primes", o.primes, "comma-separated primes")->capture_default_str();
  };
  auto plot_opt = [&](CLI::App* sub) {
    sub->add_option("--plot-data", o.plot_data, "gnuplot data file");
  };

  auto* terms_cmd = app.add_subcommand("terms", "exact terms U_n");
  common(terms_cmd);
  terms_cmd->add_option("--from", o.from)->capture_default_str();
  terms_cmd->add_option("--to", o.to)->capture_default_str();

  common(app.add_subcommand("spectral", "roots, dominance, degeneracy, hypotheses"));

  auto* ksums_cmd = app.add_subcommand("ksums", "ordered distinct k-sums");
  common(ksums_cmd);
  ksum_opts(ksums_cmd);
  ksums_cmd->add_option("--limit", o.limit, "stop after this many records (0 = all)");

  for (const char* name : {"exponents", "thm1", "thm2"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "exponents"
                                             ? "S-part exponent series (CSV)"
                                             : "banded exponent-trend check");
    common(sub);
    ksum_opts(sub);
    primes_opt(sub);
    if (std::string(name) != "thm2") plot_opt(sub);
    if (std::string(name) == "thm2") {
      sub->description("exponent-gap witness");
      sub->add_option("--j0", o.j0, "tail start rank")->capture_default_str();
    }
  }

  auto* thm3_cmd = app.add_subcommand("thm3", "largest prime factor of k-sums");
  common(thm3_cmd);
  ksum_opts(thm3_cmd);
  plot_opt(thm3_cmd);
  thm3_cmd->add_option("--eps", o.eps)->capture_default_str();
  thm3_cmd->add_option("--trial-bound", o.trial_bound)->capture_default_str();
  thm3_cmd->add_option("--rho-iterations", o.rho_iterations)->capture_default_str();

  auto* delta_cmd = app.add_subcommand("delta", "p-adic exponent delta");
  common(delta_cmd);
  primes_opt(delta_cmd);

  auto* chain_cmd = app.add_subcommand("lambda-chain", "linear forms in logarithms for one sum");
  common(chain_cmd);
  primes_opt(chain_cmd);
  chain_cmd->add_option("--indices", o.indices, "n_k;...;n_1")->required();

  auto* uary_cmd = app.add_subcommand("uary", "greedy U-ary expansion");
  common(uary_cmd);
  uary_cmd->add_option("--n", o.n)->required();

  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form bounds");
  bounds_cmd->add_option("--precision", o.precision)
      ->envname("SPARTLAB_PRECISION")
      ->check(CLI::Range(53, 1024));
  bounds_cmd->add_option("--seed", o.seed);
  bounds_cmd->add_option("--out", o.out);
  bounds_cmd->add_flag("--sunit-count", o.sunit, "S-unit solution count bound");
  bounds_cmd->add_option("--s", o.s)->capture_default_str();
  bounds_cmd->add_option("--d", o.d)->capture_default_str();
  bounds_cmd->add_option("--M", o.M)->capture_default_str();
  bounds_cmd->add_flag("--matveev", o.matveev, "Matveev lower bound");
  bounds_cmd->add_option("--m", o.m)->capture_default_str();
  bounds_cmd->add_option("--D", o.D)->capture_default_str();
  bounds_cmd->add_option("--logA", o.logA, "comma-separated log A_j");
  bounds_cmd->add_option("--B", o.B)->capture_default_str();
  bounds_cmd->add_flag("--height", o.height, "absolute logarithmic height");
  bounds_cmd->add_option("--poly", o.poly, "coefficients, leading first");
  bounds_cmd->add_flag("--force-mahler", o.force_mahler);

  auto* zeros_cmd = app.add_subcommand("zeros", "indices n <= N with U_n = 0");
  common(zeros_cmd);
  zeros_cmd->add_option("--to", o.to)->capture_default_str();

  auto* van_cmd = app.add_subcommand("vanishing", "k-tuples with a vanishing subsum");
  common(van_cmd);
  ksum_opts(van_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    const std::string& c = o.command;
    if (c == "terms") cmd_terms(o);
    else if (c == "spectral") cmd_spectral(o);
    else if (c == "ksums") cmd_ksums(o);
    else if (c == "exponents") cmd_exponents(o);
    else if (c == "thm1") cmd_thm1(o);
    else if (c == "thm2") cmd_thm2(o);
    else if (c == "thm3") cmd_thm3(o);
    else if (c == "delta") cmd_delta(o);
    else if (c == "lambda-chain") cmd_lambda_chain(o);
    else if (c == "uary") cmd_uary(o);
    else if (c == "bounds") cmd_bounds(o);
    else if (c == "zeros") cmd_zeros(o);
    else if (c == "vanishing") cmd_vanishing(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
