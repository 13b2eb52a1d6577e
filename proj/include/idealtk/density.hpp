#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "idealtk/ideal_spec.hpp"
#include "idealtk/truncated_set.hpp"
#include "idealtk/weights.hpp"

namespace idealtk {

// 20 geometric checkpoints from max(16, N/64) up to N. The narrow span keeps
// the tail checkpoints deep enough that counting noise at the tail stays well
// below the tolerances used throughout.
std::vector<std::uint64_t> default_schedule(std::uint64_t horizon,
                                            int points = 20);

struct SchedulePoint {
  std::uint64_t n;
  double ratio;  // sum_{s in S, s <= n} f(s) / sum_{i <= n} f(i)
};

struct DensityEstimate {
  // Ratio at the final checkpoint (n = schedule.back()). The trace of a
  // convergent set settles by the tail, so the final point is the cleanest
  // stand-in for the limsup; tail_max is kept as the classical upper proxy.
  double value = 0.0;
  double tail_max = 0.0;           // max ratio over the tail half
  std::vector<SchedulePoint> trace;
  bool converged = false;          // tail spread below tolerance
  double tail_spread = 0.0;        // (max - min) over tail half
};

// d*_f(S) at finite horizon: the f-weighted counting ratio along the
// schedule. Throws if the schedule is empty or reaches past S.horizon, or if
// f is not defined up to the last checkpoint.
DensityEstimate weighted_upper_density(const TruncatedSet& s,
                                       const WeightFunction& f,
                                       std::span<const std::uint64_t> schedule);

// d*_alpha(S): weights i^alpha, alpha >= -1. Identical (bit-for-bit) to
// weighted_upper_density with WeightFunction::power(alpha).
DensityEstimate upper_alpha_density(const TruncatedSet& s, double alpha,
                                    std::span<const std::uint64_t> schedule);

DensityEstimate upper_alpha_density(const TruncatedSet& s, double alpha);

// Three-valued membership at finite horizon: asymptotic statements only
// support graded verdicts on truncated data.
enum class Verdict { In, Out, Inconclusive };

const char* to_string(Verdict v);

struct MembershipThresholds {
  double in_ceiling = 1e-3;  // estimate at or below: probably in the ideal
  double out_floor = 1e-2;   // estimate at or above: probably outside
};

Verdict density_verdict(const DensityEstimate& est,
                        const MembershipThresholds& thresholds = {});

// --- Summable ideals -------------------------------------------------------

struct TailSumReport {
  std::vector<std::uint64_t> cutpoints;
  std::vector<double> tails;    // sum_{s in S, s > n} f(s), non-increasing
  double flattening_ratio = 0.0;  // last tail / first tail (0 when empty)
  Verdict verdict = Verdict::Inconclusive;
};

// Default cutpoints: 8 geometric points from N/128 to N/2.
std::vector<std::uint64_t> default_cutpoints(std::uint64_t horizon);

// Tail masses of S under f. Flattening tails (ratio below the threshold)
// signal probable membership in the summable ideal I_f.
TailSumReport summable_tail(const TruncatedSet& s, const WeightFunction& f,
                            std::span<const std::uint64_t> cutpoints,
                            double flatten_threshold = 0.05);

// --- Spec-level measure -----------------------------------------------------

// The in-[0,1] "largeness" measure the limit-point machinery uses for the
// cluster side: weighted density at full horizon for the density families,
// min(1, f-mass of S beyond N/2) for summable ideals.
double spec_measure(const TruncatedSet& s, const IdealSpec& spec);

// Graded verdict for "S in the ideal?" under the given spec.
Verdict spec_membership(const TruncatedSet& s, const IdealSpec& spec,
                        const MembershipThresholds& thresholds = {});

// --- Stretchability ---------------------------------------------------------

struct StretchabilityEntry {
  std::uint64_t k;
  double scaled_density;   // estimate for kA
  double bound;            // floor/k * (1 - slack)
  bool holds;
  std::size_t dropped;     // truncation loss in kA
};

struct StretchabilityReport {
  double base_density;     // estimate for A
  Verdict base_verdict;    // A against the ideal
  bool conclusive;         // false when A is already in-ideal at horizon
  std::vector<StretchabilityEntry> entries;
};

// kA must stay outside the ideal for every k; checked as density(kA) staying
// above floor/k with slack. Inconclusive (not an error) when A itself looks
// in-ideal at this horizon.
StretchabilityReport stretchability_check(
    const TruncatedSet& a, const IdealSpec& spec,
    std::span<const std::uint64_t> ks,
    const MembershipThresholds& thresholds = {}, double slack = 0.05);

}  // namespace idealtk
