#include "idealtk/blocks.hpp"

#include <algorithm>
#include <string>

#include "idealtk/density.hpp"
#include "idealtk/error.hpp"

namespace idealtk {

BlockSequence build_blocks(const WeightFunction& f, std::uint64_t horizon,
                           double target_slack, std::size_t min_blocks) {
  if (horizon < 2) throw Error("build_blocks: horizon must be >= 2");
  if (!(target_slack > 0.0 && target_slack < 0.5))
    throw Error("build_blocks: target_slack must lie in (0, 0.5)");
  if (horizon > f.domain_end())
    throw Error("build_blocks: weight undefined up to the horizon");

  BlockSequence blocks;
  blocks.weight = f;
  blocks.slack = target_slack;

  double prefix = f(1);           // mass of [1, z_k]
  double block = 0.0;             // mass of (z_k, n]
  blocks.endpoints.push_back(1);
  blocks.prefix_mass.push_back(prefix);
  for (std::uint64_t n = 2; n <= horizon; ++n) {
    block += f(n);
    if (block >= (1.0 - target_slack) * prefix) {
      blocks.ratio_trace.push_back(block / prefix);
      prefix += block;
      block = 0.0;
      blocks.endpoints.push_back(n);
      blocks.prefix_mass.push_back(prefix);
    }
  }

  if (blocks.block_count() < min_blocks) {
    // Stalled leftover mass means the partial sums have effectively stopped
    // growing: the divergence precondition fails and no horizon will help.
    if (block < 0.05 * (1.0 - target_slack) * prefix)
      throw Error("build_blocks: partial sums of f stopped growing by n = " +
                  std::to_string(horizon) + "; sum f(n) must diverge");
    // A rough size hint: each further block at least doubles the endpoint.
    const std::uint64_t missing = min_blocks - blocks.block_count();
    throw Error("build_blocks: only " + std::to_string(blocks.block_count()) +
                " complete blocks fit below " + std::to_string(horizon) +
                "; need " + std::to_string(min_blocks) +
                " (try a horizon of at least " +
                std::to_string(horizon << std::min<std::uint64_t>(missing, 16))
                + ")");
  }
  return blocks;
}

BlockSequence doubling_blocks(std::uint64_t horizon) {
  return build_blocks(WeightFunction::constant_one(), horizon, 1e-9, 8);
}

NormEstimate norm_estimate(const TruncatedSet& s, const BlockSequence& blocks) {
  if (blocks.block_count() == 0) throw Error("norm_estimate: no blocks");
  if (s.horizon() < blocks.last_endpoint())
    throw Error("norm_estimate: set horizon " + std::to_string(s.horizon()) +
                " below last block endpoint " +
                std::to_string(blocks.last_endpoint()));

  NormEstimate est;
  est.block_ratios.assign(blocks.block_count(), 0.0);
  const auto& z = blocks.endpoints;
  const auto& f = blocks.weight;
  std::size_t k = 0;  // current block (z[k], z[k+1]]
  for (std::uint64_t m : s.members()) {
    if (m <= z.front()) continue;
    if (m > z.back()) break;
    while (m > z[k + 1]) ++k;
    est.block_ratios[k] += f(m);
  }
  for (std::size_t i = 0; i < est.block_ratios.size(); ++i)
    est.block_ratios[i] /= blocks.prefix_mass[i + 1];

  const std::size_t tail_start = est.block_ratios.size() / 2;
  double v = 0.0;
  for (std::size_t i = tail_start; i < est.block_ratios.size(); ++i)
    v = std::max(v, est.block_ratios[i]);
  est.value = v;
  return est;
}

double segment_block_mass(const TruncatedSet& s, std::uint64_t lo,
                          std::uint64_t hi, const BlockSequence& blocks) {
  if (hi <= lo) return 0.0;
  const auto& z = blocks.endpoints;
  const auto& f = blocks.weight;
  const auto members = s.members();
  auto it = std::upper_bound(members.begin(), members.end(), lo);
  double best = 0.0, bin = 0.0;
  std::size_t k = 0;
  for (; it != members.end() && *it <= hi; ++it) {
    const std::uint64_t m = *it;
    if (m <= z.front() || m > z.back()) continue;
    std::size_t kk = k;
    while (m > z[kk + 1]) ++kk;
    if (kk != k) {
      best = std::max(best, bin / blocks.prefix_mass[k + 1]);
      bin = 0.0;
      k = kk;
    }
    bin += f(m);
  }
  if (k + 1 < blocks.prefix_mass.size())
    best = std::max(best, bin / blocks.prefix_mass[k + 1]);
  return best;
}

ThinnabilityIIReport thinnability_strong_ii_check(const TruncatedSet& a,
                                                  const TruncatedSet& b,
                                                  const BlockSequence& blocks,
                                                  double slack) {
  ThinnabilityIIReport report{};
  const auto density_a = upper_alpha_density(a, 0.0);
  report.density_a = density_a.value;
  report.conclusive =
      density_verdict(density_a) == Verdict::Out && report.density_a > 0.0;
  if (!report.conclusive) return report;

  report.r = static_cast<std::uint64_t>(1.0 / report.density_a) + 1;
  report.norm_b = norm_estimate(b, blocks).value;

  auto composed = compose(b, a);  // B_A = {b_a : a in A}
  report.dropped = composed.dropped;
  report.norm_b_a = norm_estimate(composed.set, blocks).value;
  report.bound = report.norm_b / static_cast<double>(report.r) - slack;
  report.holds = report.norm_b_a >= report.bound;
  return report;
}

ThinnabilityIIIReport thinnability_strong_iii_check(const TruncatedSet& x,
                                                    const TruncatedSet& y,
                                                    const BlockSequence& blocks,
                                                    double slack) {
  const auto dom = dominates(x, y);
  if (!dom.holds)
    throw Error("thinnability (iii): X <= Y fails at enumeration index " +
                std::to_string(*dom.first_violation));
  ThinnabilityIIIReport report{};
  report.norm_x = norm_estimate(x, blocks).value;
  report.norm_y = norm_estimate(y, blocks).value;
  report.bound = report.norm_y / 6.0 - slack;
  report.holds = report.norm_x >= report.bound;
  return report;
}

}  // namespace idealtk
