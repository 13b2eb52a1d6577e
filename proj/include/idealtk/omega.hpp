#pragma once

#include <cstdint>
#include <vector>

#include "idealtk/density.hpp"
#include "idealtk/sequences.hpp"
#include "idealtk/truncated_set.hpp"

namespace idealtk {

// A sampled dyadic omega: fair-coin digits d_1..d_N from a seeded
// std::mt19937_64 (digit = lowest bit of successive outputs). The all-zero
// draw is regenerated with a bumped stream counter, mirroring the
// restriction to non-terminating expansions. Regeneration is deterministic,
// so a sample is a pure function of (seed, N).
struct OmegaSample {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;            // regeneration counter actually used
  std::vector<std::uint8_t> digits;    // d_1..d_N
  TruncatedSet selected;               // {i : d_i = 1}
  double normality_deviation = 0;      // |mean(d) - 1/2|
  bool deviation_flagged = false;      // beyond 4 sigma; flagged, not fatal

  static OmegaSample draw(std::uint64_t seed, std::uint64_t n);
  static OmegaSample all_ones(std::uint64_t n);  // test hook
  static OmegaSample from_digits(std::uint64_t seed,
                                 std::vector<std::uint8_t> digits);
};

// x restricted to omega's support, in original order; the new horizon is the
// number of selected indices. Throws on digit-length mismatch or an empty
// selection.
SequenceSource restrict(const SequenceSource& x, const OmegaSample& omega);

// Density of K = {k : a_k in B} over A's enumeration: the density of B
// relative to A.
DensityEstimate relative_density(const TruncatedSet& a, const TruncatedSet& b);

}  // namespace idealtk
