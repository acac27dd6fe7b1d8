#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "spartlab/errors.hpp"
#include "spartlab/ksum.hpp"

using namespace spartlab;

namespace {

// All subsets of the window with the allowed sizes, grouped by value.
std::map<mpz_class, std::vector<IndexTuple>> brute(const RecurrenceSpec& spec, unsigned k,
                                                   IndexWindow w, KSumMode mode) {
  auto u = terms(spec, w.hi);
  std::map<mpz_class, std::vector<IndexTuple>> out;
  const unsigned long size = w.size();
  for (unsigned long mask = 1; mask < (1UL << size); ++mask) {
    unsigned bits = static_cast<unsigned>(__builtin_popcountl(mask));
    if (bits > k || (mode == KSumMode::kExactlyK && bits != k)) continue;
    IndexTuple t;
    mpz_class v = 0;
    for (unsigned long i = size; i-- > 0;) {
      if (mask >> i & 1) {
        t.push_back(w.lo + i);
        v += u[w.lo + i];
      }
    }
    out[v].push_back(t);
  }
  for (auto& [v, ws] : out) std::sort(ws.begin(), ws.end());
  return out;
}

}  // namespace

TEST_CASE("enumeration equals brute force") {
  for (const char* name : {"fibonacci", "pell", "lucas"}) {
    for (unsigned k = 1; k <= 3; ++k) {
      for (auto mode : {KSumMode::kAtMostK, KSumMode::kExactlyK}) {
        IndexWindow w{1, 12};
        auto spec = preset(name);
        auto expect = brute(spec, k, w, mode);
        auto got = enumerate_ksums(spec, k, w, mode);
        REQUIRE(got.size() == expect.size());
        std::size_t i = 0;
        for (const auto& [v, ws] : expect) {
          CHECK(got[i].value == v);
          CHECK(got[i].witnesses == ws);
          CHECK(got[i].rank == i + 1);
          ++i;
        }
      }
    }
  }
}

TEST_CASE("Fibonacci duplicates collapse with all witnesses") {
  auto recs = enumerate_ksums(preset("fibonacci"), 2, {1, 10}, KSumMode::kAtMostK, 3);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].value == 1);
  CHECK(recs[0].witnesses.size() == 2);  // F_1 and F_2
  CHECK(recs[1].value == 2);
  CHECK(recs[1].witnesses.size() == 2);  // F_3 and F_2 + F_1
}

TEST_CASE("rank lookup and range errors") {
  auto spec = preset("pell");
  auto all = enumerate_ksums(spec, 2, {1, 8}, KSumMode::kExactlyK);
  CHECK(rank_lookup(spec, 2, {1, 8}, KSumMode::kExactlyK, 5).value == all[4].value);
  CHECK_THROWS_AS(rank_lookup(spec, 2, {1, 8}, KSumMode::kExactlyK, all.size() + 1), ValidationError);
  CHECK_THROWS_AS(rank_lookup(spec, 2, {1, 8}, KSumMode::kExactlyK, 0), ValidationError);
}

TEST_CASE("stream validation and guard") {
  auto fib = preset("fibonacci");
  CHECK_THROWS_AS(KSumStream(fib, 0, {1, 5}), ValidationError);
  CHECK_THROWS_AS(KSumStream(fib, 3, {1, 2}), ValidationError);
  CHECK_THROWS_AS(KSumStream(fib, 1, {0, 5}), ValidationError);  // U_0 = 0
  KSumStream s(fib, 2, {1, 30});
  CHECK(s.guard_certified());
  CHECK(s.stability_bound() == term(fib, 30));
  CHECK_THROWS_AS(parse_mode("some"), ValidationError);
  CHECK(parse_mode("exactly-k") == KSumMode::kExactlyK);
}

TEST_CASE("csv export") {
  auto recs = enumerate_ksums(preset("fibonacci"), 1, {3, 5}, KSumMode::kAtMostK);
  CHECK(ksum_csv(recs) == "rank,value,witness_count,first_witness\n1,2,1,3\n2,3,1,4\n3,5,1,5\n");
}

TEST_CASE("vanishing subsums") {
  CHECK(vanishing_subsum_scan(preset("fibonacci"), 3, {1, 20}).empty());
  auto alt = make_spec("alt", {0, 1}, {1, -1});  // 1, -1, 1, -1, ...
  auto hits = vanishing_subsum_scan(alt, 2, {0, 3});
  // Pairs of opposite parity vanish: (3,2), (3,0), (2,1), (1,0).
  CHECK(hits.size() == 4);
  for (const auto& h : hits) {
    mpz_class s = 0;
    for (auto i : h.subset) s += term(alt, i);
    CHECK(s == 0);
    CHECK_FALSE(h.subset.empty());
  }
  CHECK_THROWS_AS(vanishing_subsum_scan(alt, 10, {0, 200}), EffortCapError);
}

TEST_CASE("Zeckendorf expansions") {
  auto fib = preset("fibonacci");
  auto e = uary_expand(100, fib);
  CHECK(e.zeckendorf_valid);
  CHECK(uary_value(e, fib) == 100);
  // 100 = 89 + 8 + 3 = F_11 + F_6 + F_4.
  std::vector<std::size_t> used;
  for (std::size_t j = 0; j < e.digits.size(); ++j) {
    if (e.digits[j] != 0) used.push_back(j);
  }
  CHECK(used == std::vector<std::size_t>{4, 6, 11});
  for (long n = 1; n <= 2000; ++n) {
    auto x = uary_expand(n, fib);
    CHECK(x.zeckendorf_valid);
    CHECK(uary_value(x, fib) == n);
  }
  auto pell = preset("pell");
  for (long n = 1; n <= 500; ++n) CHECK(uary_value(uary_expand(n, pell), pell) == n);
  CHECK_THROWS_AS(uary_expand(0, fib), ValidationError);
}
