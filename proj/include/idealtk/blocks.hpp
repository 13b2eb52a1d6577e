#pragma once

#include <cstdint>
#include <vector>

#include "idealtk/truncated_set.hpp"
#include "idealtk/weights.hpp"

namespace idealtk {

// Endpoints z_1 < z_2 < ... <= N partitioning the horizon into blocks
// (z_k, z_{k+1}] whose f-mass matches the prefix mass [1, z_k] up to the
// construction slack. The block-ratio limsup over these blocks realizes the
// submeasure norm for the density-type ideals.
struct BlockSequence {
  WeightFunction weight = WeightFunction::constant_one();
  std::vector<std::uint64_t> endpoints;   // z_1 .. z_m
  std::vector<double> prefix_mass;        // sum_{[1, z_k]} f, per endpoint
  std::vector<double> ratio_trace;        // block mass / prefix mass, per block
  double slack = 0.0;

  std::size_t block_count() const {
    return endpoints.size() < 2 ? 0 : endpoints.size() - 1;
  }
  std::uint64_t last_endpoint() const {
    return endpoints.empty() ? 0 : endpoints.back();
  }
};

// Greedy construction: z_{k+1} is the smallest integer whose block mass
// reaches (1 - slack) times the prefix mass; the final partial block is
// discarded. Throws when f's partial sums stop growing (no divergence at
// this horizon) or when fewer than min_blocks complete blocks fit.
BlockSequence build_blocks(const WeightFunction& f, std::uint64_t horizon,
                           double target_slack = 0.05,
                           std::size_t min_blocks = 8);

// Constant-one weight with vanishing slack: endpoints are exactly the powers
// of two starting from z_1 = 1.
BlockSequence doubling_blocks(std::uint64_t horizon);

struct NormEstimate {
  double value = 0.0;               // max block ratio over the tail half
  std::vector<double> block_ratios;  // per block: mass of S in block / prefix
                                     // mass up to the block's right endpoint
};

// ||S|| via the block-ratio limsup, estimated as the max over the tail half
// of blocks. Requires S.horizon >= blocks.last_endpoint().
NormEstimate norm_estimate(const TruncatedSet& s, const BlockSequence& blocks);

// Largest single-block ratio contributed by the members of S inside
// (lo, hi]; the computable surrogate for the mass of a finite segment. Used
// by the diagonal construction's per-segment criterion.
double segment_block_mass(const TruncatedSet& s, std::uint64_t lo,
                          std::uint64_t hi, const BlockSequence& blocks);

// --- Strong thinnability checks ---------------------------------------------

struct ThinnabilityIIReport {
  bool conclusive;        // false when A looks in-ideal at this horizon
  double density_a;       // asymptotic (alpha = 0) density estimate of A
  std::uint64_t r;        // floor(1/a) + 1
  double norm_b;          // q-hat
  double norm_b_a;        // n-hat, norm of B_A = {b_a : a in A}
  double bound;           // q-hat / r - slack
  bool holds;
  std::size_t dropped;    // truncation loss in the composition
};

// Checks ||B_A|| >= ||B|| / r - slack with r = floor(1/a) + 1. Note the
// subscript order: B_A indexes B's enumeration by the elements of A, i.e.
// compose(B, A).
ThinnabilityIIReport thinnability_strong_ii_check(const TruncatedSet& a,
                                                  const TruncatedSet& b,
                                                  const BlockSequence& blocks,
                                                  double slack = 0.02);

struct ThinnabilityIIIReport {
  double norm_x;
  double norm_y;
  double bound;           // norm_y / 6 - slack
  bool holds;
};

// Checks ||X|| >= ||Y|| / 6 - slack for X <= Y. Throws (naming the first
// violating index) when the dominance precondition fails.
ThinnabilityIIIReport thinnability_strong_iii_check(const TruncatedSet& x,
                                                    const TruncatedSet& y,
                                                    const BlockSequence& blocks,
                                                    double slack = 0.02);

}  // namespace idealtk
