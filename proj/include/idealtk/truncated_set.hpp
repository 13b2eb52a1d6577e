#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace idealtk {

class LpfTable;

// A subset of {1,...,N} standing in for an infinite set of naturals.
// Members are kept as a sorted, duplicate-free index list; the canonical
// enumeration a_1 < a_2 < ... is just members()[0], members()[1], ...
class TruncatedSet {
 public:
  TruncatedSet() = default;

  // Validates range, ordering and uniqueness; throws Error on violation.
  TruncatedSet(std::uint64_t horizon, std::vector<std::uint64_t> members);

  static TruncatedSet empty(std::uint64_t horizon);
  static TruncatedSet all(std::uint64_t horizon);
  static TruncatedSet evens(std::uint64_t horizon);
  static TruncatedSet multiples(std::uint64_t k, std::uint64_t horizon);
  static TruncatedSet squares(std::uint64_t horizon);
  static TruncatedSet powers(std::uint64_t base, std::uint64_t horizon);

  std::uint64_t horizon() const { return horizon_; }
  std::size_t size() const { return members_.size(); }
  bool is_empty() const { return members_.empty(); }
  std::span<const std::uint64_t> members() const { return members_; }

  // a_k with 1-based k; throws if k is out of range.
  std::uint64_t nth(std::size_t k) const;

  bool contains(std::uint64_t n) const;

  // |S ∩ [1, n]|
  std::uint64_t count_leq(std::uint64_t n) const;

 private:
  std::uint64_t horizon_ = 0;
  std::vector<std::uint64_t> members_;
};

struct ComposeResult {
  TruncatedSet set;      // {a_b : b in B, b <= |A|}, horizon = A.horizon
  std::size_t dropped;   // members of B beyond |A| (truncation loss)
};

// A_B := {a_b : b in B}. Throws on empty A (no enumeration to index into).
ComposeResult compose(const TruncatedSet& a, const TruncatedSet& b);

struct ScaleResult {
  TruncatedSet set;      // {k*a : a in A, k*a <= horizon}
  std::size_t dropped;   // members pushed past the horizon
};

// kA := {ka : a in A}. Throws on k = 0.
ScaleResult scale(std::uint64_t k, const TruncatedSet& a);

struct DominanceResult {
  bool holds;                                // x_n <= y_n on the shared prefix
  std::size_t prefix_length;                 // min(|X|, |Y|)
  std::optional<std::size_t> first_violation;  // 1-based n with x_n > y_n
};

// X <= Y elementwise over the shared enumeration prefix. Throws if either
// set is empty.
DominanceResult dominates(const TruncatedSet& x, const TruncatedSet& y);

// Set literal parser: "evens", "odds", "all", "multiples:k", "squares",
// "powers:b", "lpf-level:p", "file:path" (newline-separated integers).
// "lpf-level:p" requires a sieve table covering the horizon.
TruncatedSet parse_set(std::string_view descriptor, std::uint64_t horizon,
                       const LpfTable* lpf = nullptr);

}  // namespace idealtk
