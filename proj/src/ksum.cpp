#include "spartlab/ksum.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "spartlab/errors.hpp"

namespace spartlab {

const char* to_string(KSumMode mode) {
  return mode == KSumMode::kExactlyK ? "exactly-k" : "at-most-k";
}

KSumMode parse_mode(const std::string& text) {
  if (text == "exactly-k") return KSumMode::kExactlyK;
  if (text == "at-most-k") return KSumMode::kAtMostK;
  throw ValidationError("mode must be 'exactly-k' or 'at-most-k', got '" + text + "'");
}

std::string to_string(const IndexTuple& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(t[i]);
  }
  return s;
}

// ------------------------------------------------------------- KSumStream

bool KSumStream::Later::operator()(const Node& a, const Node& b) const {
  int c = cmp(a.sum, b.sum);
  if (c != 0) return c > 0;
  return a.tuple > b.tuple;
}

KSumStream::KSumStream(const RecurrenceSpec& spec, unsigned k, IndexWindow window,
                       KSumMode mode) {
  if (k == 0) throw ValidationError("k must be at least 1");
  if (window.hi < window.lo) throw ValidationError("index window is empty");
  if (window.size() < k) {
    throw ValidationError("window of " + std::to_string(window.size()) +
                          " indices cannot hold " + std::to_string(k) + " distinct terms");
  }
  const auto u = terms(spec, window.hi);
  for (unsigned long n = window.lo; n <= window.hi; ++n) {
    if (u[n] <= 0) {
      throw ValidationError("term U_" + std::to_string(n) +
                            " is not positive; k-sums need positive terms on the window");
    }
    sorted_.emplace_back(u[n], n);
  }
  const unsigned long tail = std::min<unsigned long>(spec.order() + 1, window.size());
  for (unsigned long n = window.hi - tail + 2; n <= window.hi && tail > 1; ++n) {
    if (u[n] < u[n - 1]) {
      throw ValidationError("terms are not increasing at the end of the window (U_" +
                            std::to_string(n) + " < U_" + std::to_string(n - 1) + ")");
    }
  }
  stability_bound_ = u[window.hi];
  guard_certified_ = spec.coeffs.front() >= 1 &&
                     std::all_of(spec.coeffs.begin(), spec.coeffs.end(),
                                 [](const mpz_class& a) { return a >= 0; }) &&
                     window.size() >= static_cast<unsigned long>(spec.order());

  std::sort(sorted_.begin(), sorted_.end());
  const unsigned smallest = mode == KSumMode::kAtMostK ? 1 : k;
  for (unsigned s = smallest; s <= k; ++s) {
    std::vector<std::size_t> pos(s);
    std::iota(pos.begin(), pos.end(), 0);
    push(std::move(pos));
  }
}

void KSumStream::push(std::vector<std::size_t> pos) {
  Node n;
  n.sum = 0;
  for (std::size_t p : pos) {
    n.sum += sorted_[p].first;
    n.tuple.push_back(sorted_[p].second);
  }
  std::sort(n.tuple.rbegin(), n.tuple.rend());
  n.pos = std::move(pos);
  heap_.push(std::move(n));
}

// Each combination other than (0..s-1) has exactly one parent: decrement its
// lowest slot i with pos[i] > i. Children invert that rule.
void KSumStream::push_children(const Node& n) {
  const std::size_t s = n.pos.size();
  for (std::size_t i = 0; i < s; ++i) {
    if (i > 0 && n.pos[i - 1] != i - 1) break;
    std::size_t limit = i + 1 < s ? n.pos[i + 1] : sorted_.size();
    if (n.pos[i] + 1 < limit) {
      auto child = n.pos;
      ++child[i];
      push(std::move(child));
    }
  }
}

std::optional<KSumRecord> KSumStream::next() {
  if (heap_.empty()) return std::nullopt;
  KSumRecord rec;
  rec.value = heap_.top().sum;
  rec.rank = next_rank_++;
  while (!heap_.empty() && heap_.top().sum == rec.value) {
    Node n = heap_.top();
    heap_.pop();
    push_children(n);
    rec.witnesses.push_back(n.tuple);
  }
  rec.term_count = static_cast<unsigned>(rec.witnesses.front().size());
  return rec;
}

std::vector<KSumRecord> enumerate_ksums(const RecurrenceSpec& spec, unsigned k,
                                        IndexWindow window, KSumMode mode,
                                        std::size_t limit) {
  KSumStream stream(spec, k, window, mode);
  std::vector<KSumRecord> out;
  while (out.size() < limit) {
    auto rec = stream.next();
    if (!rec) break;
    out.push_back(std::move(*rec));
  }
  return out;
}

KSumRecord rank_lookup(const RecurrenceSpec& spec, unsigned k, IndexWindow window,
                       KSumMode mode, unsigned long j) {
  if (j == 0) throw ValidationError("ranks are 1-based");
  KSumStream stream(spec, k, window, mode);
  std::optional<KSumRecord> rec;
  unsigned long reached = 0;
  while (reached < j) {
    rec = stream.next();
    if (!rec) {
      throw ValidationError("rank " + std::to_string(j) + " out of range; maximum reachable rank is " +
                            std::to_string(reached));
    }
    ++reached;
  }
  return *rec;
}

std::string ksum_csv(const std::vector<KSumRecord>& records) {
  std::ostringstream out;
  out << "rank,value,witness_count,first_witness\n";
  for (const auto& r : records) {
    out << r.rank << ',' << r.value.get_str() << ',' << r.witnesses.size() << ','
        << to_string(r.witnesses.front()) << '\n';
  }
  return out.str();
}

// --------------------------------------------------------------- vanishing

std::vector<VanishingHit> vanishing_subsum_scan(const RecurrenceSpec& spec, unsigned k,
                                                IndexWindow window) {
  if (k == 0) throw ValidationError("k must be at least 1");
  if (window.hi < window.lo || window.size() < k) {
    throw ValidationError("window too small for " + std::to_string(k) + " indices");
  }
  if (k > 20) throw ValidationError("k above 20 is not supported by the scan");
  mpz_class count;
  mpz_bin_uiui(count.get_mpz_t(), window.size(), k);
  if (count > kVanishingScanLimit) {
    throw EffortCapError("scan of C(" + std::to_string(window.size()) + "," +
                         std::to_string(k) + ") = " + count.get_str() +
                         " tuples exceeds the limit of " +
                         std::to_string(kVanishingScanLimit));
  }
  const auto u = terms(spec, window.hi);
  std::vector<VanishingHit> hits;
  bool all_positive = true, all_negative = true;
  for (unsigned long n = window.lo; n <= window.hi; ++n) {
    if (u[n] <= 0) all_positive = false;
    if (u[n] >= 0) all_negative = false;
  }
  if (all_positive || all_negative) return hits;

  // Combinations in decreasing lexicographic order of the index tuple.
  const unsigned long w = window.size();
  std::vector<unsigned long> c(k);
  for (unsigned i = 0; i < k; ++i) c[i] = w - 1 - i;  // offsets, decreasing
  std::vector<mpz_class> sums(std::size_t{1} << k);
  while (true) {
    // Subset sums: sums[mask] = sums[mask without lowest bit] + term.
    sums[0] = 0;
    std::optional<unsigned> found;
    for (std::size_t mask = 1; mask < sums.size(); ++mask) {
      unsigned bit = static_cast<unsigned>(__builtin_ctzll(mask));
      sums[mask] = sums[mask & (mask - 1)] + u[window.lo + c[bit]];
      if (!found && sums[mask] == 0) found = static_cast<unsigned>(mask);
    }
    if (found) {
      VanishingHit hit;
      for (unsigned i = 0; i < k; ++i) {
        hit.tuple.push_back(window.lo + c[i]);
        if (*found & (1U << i)) hit.subset.push_back(window.lo + c[i]);
      }
      hits.push_back(std::move(hit));
    }
    // Advance to the next decreasing combination.
    int i = static_cast<int>(k) - 1;
    while (i >= 0) {
      unsigned long floor_val = static_cast<unsigned long>(k - 1 - i);
      if (c[i] > floor_val) break;
      --i;
    }
    if (i < 0) break;
    --c[i];
    for (unsigned j = i + 1; j < k; ++j) c[j] = c[j - 1] - 1;
  }
  return hits;
}

// -------------------------------------------------------------------- uary

namespace {

constexpr unsigned long kBaseSearchLimit = 64;

unsigned long find_base_start(const RecurrenceSpec& spec) {
  const unsigned long r = spec.order();
  const auto u = terms(spec, kBaseSearchLimit + r + 1);
  for (unsigned long s = 0; s <= kBaseSearchLimit; ++s) {
    if (u[s] != 1) continue;
    bool increasing = true;
    for (unsigned long n = s + 1; n <= s + r + 1 && increasing; ++n) {
      increasing = u[n] > u[n - 1];
    }
    if (increasing) return s;
  }
  throw ValidationError("no index s with U_s = 1 after which the sequence strictly increases; "
                        "greedy expansion undefined");
}

}  // namespace

UaryExpansion uary_expand(const mpz_class& n, const RecurrenceSpec& spec) {
  if (n < 1) throw ValidationError("U-ary expansion needs N >= 1");
  UaryExpansion e;
  e.base_start = find_base_start(spec);
  std::vector<mpz_class> u;
  TermIterator it(spec);
  while (true) {
    u.push_back(*it);
    const unsigned long i = it.index();
    if (i > e.base_start && u[i] <= u[i - 1]) {
      throw ValidationError("base sequence stops increasing at index " + std::to_string(i));
    }
    if (u[i] > n) break;
    ++it;
  }
  e.digits.assign(u.size() - 1, 0);
  mpz_class rem = n;
  for (std::size_t j = u.size() - 1; j-- > e.base_start;) {
    if (u[j] <= rem) {
      mpz_fdiv_qr(e.digits[j].get_mpz_t(), rem.get_mpz_t(), rem.get_mpz_t(), u[j].get_mpz_t());
    }
  }
  if (rem != 0) throw InternalError("greedy expansion left a remainder");
  while (!e.digits.empty() && e.digits.back() == 0) e.digits.pop_back();
  e.zeckendorf_valid = true;
  for (std::size_t j = 0; j < e.digits.size(); ++j) {
    if (e.digits[j] > 1) e.zeckendorf_valid = false;
    if (j + 1 < e.digits.size() && e.digits[j] == 1 && e.digits[j + 1] == 1) {
      e.zeckendorf_valid = false;
    }
  }
  return e;
}

mpz_class uary_value(const UaryExpansion& e, const RecurrenceSpec& spec) {
  if (e.digits.empty()) return 0;
  const auto u = terms(spec, e.digits.size() - 1);
  mpz_class total = 0;
  for (std::size_t j = 0; j < e.digits.size(); ++j) total += e.digits[j] * u[j];
  return total;
}

}  // namespace spartlab
