#pragma once

#include <gmpxx.h>

#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "spartlab/recurrence.hpp"

namespace spartlab {

enum class KSumMode { kExactlyK, kAtMostK };
const char* to_string(KSumMode mode);
KSumMode parse_mode(const std::string& text);  // "exactly-k" | "at-most-k"

struct IndexWindow {
  unsigned long lo = 0, hi = 0;  // inclusive
  unsigned long size() const { return hi - lo + 1; }
};

using IndexTuple = std::vector<unsigned long>;  // strictly decreasing
std::string to_string(const IndexTuple& t);     // "5;3"

struct KSumRecord {
  mpz_class value;
  unsigned long rank = 0;  // 1-based
  std::vector<IndexTuple> witnesses;
  unsigned term_count = 0;  // summands in the first witness
};

/// Distinct k-sums of window terms in strictly increasing order, produced
/// lazily from a heap over combinations of value-sorted positions. Ties are
/// broken by (value, decreasing index tuple) so output is deterministic.
class KSumStream {
 public:
  /// Throws ValidationError unless k >= 1, the window holds at least k
  /// indices, every window term is positive and the last min(r + 1, w)
  /// window terms are non-decreasing.
  KSumStream(const RecurrenceSpec& spec, unsigned k, IndexWindow window,
             KSumMode mode = KSumMode::kAtMostK);

  std::optional<KSumRecord> next();

  /// Values strictly below this bound cannot change when the window's upper
  /// end grows, provided guard_certified() holds.
  const mpz_class& stability_bound() const { return stability_bound_; }
  /// True when the recurrence provably keeps terms non-decreasing past the
  /// window (a_1 >= 1, all a_i >= 0, positive terms).
  bool guard_certified() const { return guard_certified_; }

 private:
  struct Node {
    mpz_class sum;
    std::vector<std::size_t> pos;  // increasing positions into sorted_
    IndexTuple tuple;              // decreasing original indices
  };
  struct Later {
    bool operator()(const Node& a, const Node& b) const;
  };
  void push(std::vector<std::size_t> pos);
  void push_children(const Node& n);

  std::vector<std::pair<mpz_class, unsigned long>> sorted_;  // (value, index)
  std::priority_queue<Node, std::vector<Node>, Later> heap_;
  unsigned long next_rank_ = 1;
  mpz_class stability_bound_;
  bool guard_certified_ = false;
};

std::vector<KSumRecord> enumerate_ksums(const RecurrenceSpec& spec, unsigned k,
                                        IndexWindow window, KSumMode mode,
                                        std::size_t limit = SIZE_MAX);

/// The j-th record (1-based); ValidationError naming the maximum reachable rank.
KSumRecord rank_lookup(const RecurrenceSpec& spec, unsigned k, IndexWindow window,
                       KSumMode mode, unsigned long j);

/// rank,value,witness_count,first_witness
std::string ksum_csv(const std::vector<KSumRecord>& records);

struct VanishingHit {
  IndexTuple tuple;   // the k indices
  IndexTuple subset;  // a nonempty sub-tuple whose terms sum to zero
};

inline constexpr unsigned long kVanishingScanLimit = 10'000'000;

/// Every k-subset of the window having a vanishing nonempty subsum. Throws
/// EffortCapError when C(window, k) exceeds kVanishingScanLimit.
std::vector<VanishingHit> vanishing_subsum_scan(const RecurrenceSpec& spec, unsigned k,
                                                IndexWindow window);

struct UaryExpansion {
  std::vector<mpz_class> digits;  // digits[j] multiplies U_j
  unsigned long base_start = 0;   // smallest index used as a base term
  bool zeckendorf_valid = false;  // digits in {0,1}, no two adjacent ones
};

/// Greedy expansion of N >= 1 over U_s < U_{s+1} < ..., where s is the least
/// index with U_s = 1 after which the sequence strictly increases.
UaryExpansion uary_expand(const mpz_class& n, const RecurrenceSpec& spec);
mpz_class uary_value(const UaryExpansion& e, const RecurrenceSpec& spec);

}  // namespace spartlab
