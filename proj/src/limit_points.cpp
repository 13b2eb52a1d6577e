#include "idealtk/limit_points.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "idealtk/density.hpp"
#include "idealtk/error.hpp"

namespace idealtk {

TruncatedSet neighborhood_index_set(const SequenceSource& x, double ell,
                                    double eps) {
  if (!(eps > 0.0)) throw Error("neighborhood_index_set: eps must be > 0");
  std::vector<std::uint64_t> members;
  const auto& v = x.values();
  for (std::uint64_t n = 1; n <= x.horizon(); ++n)
    if (std::fabs(v[n - 1] - ell) <= eps) members.push_back(n);
  return TruncatedSet(x.horizon(), std::move(members));
}

std::vector<double> candidate_grid(const SequenceSource& x,
                                   const LimitPointParams& params) {
  const auto& values = x.values();
  const std::uint64_t n = x.horizon();

  // Observed values above the multiplicity floor: the sequence's atoms.
  std::unordered_map<double, std::uint64_t> counts;
  counts.reserve(1024);
  for (double v : values) ++counts[v];
  const auto floor_count = std::max<std::uint64_t>(
      2, static_cast<std::uint64_t>(params.multiplicity_floor_frac *
                                    static_cast<double>(n)));
  std::vector<std::pair<double, bool>> cands;  // (value, observed)
  for (const auto& [v, c] : counts)
    if (c >= floor_count) cands.emplace_back(v, true);

  // Uniform grid over the value range, endpoints snapped outward to the grid
  // step so that round values just past the range (0 in particular) are
  // candidates too.
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (params.grid_points >= 2 && hi > lo) {
    const double step = (hi - lo) / static_cast<double>(params.grid_points - 1);
    const double start = std::floor(lo / step) * step;
    for (double p = start; p <= hi + 0.5 * step; p += step)
      cands.emplace_back(p, false);
  } else {
    cands.emplace_back(lo, false);
  }

  std::sort(cands.begin(), cands.end());
  // Collapse near-coincident entries, preferring the observed (exact) value.
  // The tolerance absorbs the snapping offset between grid points and the
  // atoms they shadow while keeping genuinely distinct atoms apart.
  const double merge_tol = std::max(1e-12, 1e-4 * (hi - lo));
  std::vector<double> out;
  std::size_t i = 0;
  while (i < cands.size()) {
    std::size_t j = i;
    double pick = cands[i].first;
    bool have_observed = cands[i].second;
    while (j + 1 < cands.size() &&
           cands[j + 1].first - cands[i].first <= merge_tol) {
      ++j;
      if (cands[j].second && !have_observed) {
        pick = cands[j].first;
        have_observed = true;
      }
    }
    out.push_back(pick);
    i = j + 1;
  }
  return out;
}

namespace {

struct LevelAccum {
  std::uint64_t count = 0;
  std::uint64_t min_member = 0;
  double member_mass = 0;           // sum of f over members
  double tail_mass = 0;             // sum of f over members beyond N/2
  std::vector<double> block_bins;   // f-mass per block
};

double tail_half_max(const std::vector<double>& bins,
                     const BlockSequence& blocks) {
  double v = 0.0;
  for (std::size_t k = bins.size() / 2; k < bins.size(); ++k)
    v = std::max(v, bins[k] / blocks.prefix_mass[k + 1]);
  return v;
}

}  // namespace

std::vector<double> LimitPointReport::lambda_points() const {
  return lambda_points_at(q);
}

std::vector<double> LimitPointReport::lambda_points_at(
    double threshold, bool resolved_only) const {
  std::vector<double> out;
  for (const auto& c : candidates) {
    if (c.lambda_unresolved || c.lambda_score < threshold) continue;
    if (resolved_only && !c.fine_resolved) continue;
    out.push_back(c.ell);
  }
  return out;
}

std::vector<double> LimitPointReport::gamma_points() const {
  std::vector<double> out;
  for (const auto& c : candidates)
    if (c.gamma_member) out.push_back(c.ell);
  return out;
}

const CandidateReport* LimitPointReport::find(double ell, double tol) const {
  const CandidateReport* best = nullptr;
  double best_d = tol;
  for (const auto& c : candidates) {
    const double d = std::fabs(c.ell - ell);
    if (d <= best_d) {
      best_d = d;
      best = &c;
    }
  }
  return best;
}

LimitPointReport estimate_limit_points(const SequenceSource& x,
                                       const IdealSpec& spec,
                                       const LimitPointParams& params,
                                       const BlockSequence* blocks) {
  if (!(params.q > 0.0)) throw Error("estimate_limit_points: q must be > 0");
  if (params.eps_schedule.empty())
    throw Error("estimate_limit_points: empty eps schedule");
  for (std::size_t i = 1; i < params.eps_schedule.size(); ++i)
    if (params.eps_schedule[i] >= params.eps_schedule[i - 1])
      throw Error("estimate_limit_points: eps schedule must be strictly "
                  "decreasing");
  for (double eps : params.eps_schedule)
    if (!(eps > 0.0)) throw Error("estimate_limit_points: eps must be > 0");

  const std::uint64_t n = x.horizon();
  const bool summable = spec.family() == IdealFamily::Summable;
  const auto& f = spec.weight();
  if (n > f.domain_end())
    throw Error("estimate_limit_points: weight undefined up to the horizon");

  BlockSequence local_blocks;
  if (!summable) {
    if (blocks == nullptr) {
      local_blocks = f.is_constant_one()
                         ? doubling_blocks(n)
                         : build_blocks(f, n, params.block_slack);
      blocks = &local_blocks;
    } else if (blocks->last_endpoint() > n) {
      throw Error("estimate_limit_points: blocks exceed the horizon");
    }
  }

  const std::vector<double> grid = params.explicit_grid.empty()
                                       ? candidate_grid(x, params)
                                       : params.explicit_grid;
  if (grid.empty()) throw Error("estimate_limit_points: empty candidate grid");

  // Full-prefix denominator for the cluster-side density measure.
  double den_total = 0.0;
  if (!summable)
    for (std::uint64_t i = 1; i <= n; ++i) den_total += f(i);

  const std::uint64_t censor_bound =
      std::max<std::uint64_t>(1, n / std::max<std::uint64_t>(params.censor_depth, 1));
  const auto& eps = params.eps_schedule;
  const std::uint64_t half = n / 2;
  const auto& values = x.values();

  LimitPointReport report;
  report.q = params.q;
  report.gamma_threshold = params.gamma_threshold > 0.0
                               ? params.gamma_threshold
                               : params.q * spec.gamma_threshold_factor();

  const std::size_t levels = eps.size();
  const std::size_t nblocks = summable ? 0 : blocks->block_count();
  std::vector<LevelAccum> acc(levels);
  for (auto& a : acc) a.block_bins.assign(nblocks, 0.0);

  for (double ell : grid) {
    for (auto& a : acc) {
      a.count = 0;
      a.min_member = 0;
      a.member_mass = 0;
      a.tail_mass = 0;
      std::fill(a.block_bins.begin(), a.block_bins.end(), 0.0);
    }

    std::size_t k = 0;  // current block, advanced with n
    static const std::vector<std::uint64_t> kNoEndpoints;
    const auto& z = summable ? kNoEndpoints : blocks->endpoints;
    for (std::uint64_t i = 1; i <= n; ++i) {
      const double d = std::fabs(values[i - 1] - ell);
      if (d > eps[0]) continue;
      const double w = f(i);
      const bool in_blocks =
          !summable && i > z.front() && i <= z.back();
      if (in_blocks)
        while (i > z[k + 1]) ++k;
      for (std::size_t j = 0; j < levels && d <= eps[j]; ++j) {
        auto& a = acc[j];
        if (a.count == 0) a.min_member = i;
        ++a.count;
        a.member_mass += w;
        if (i > half) a.tail_mass += w;
        if (in_blocks) a.block_bins[k] += w;
      }
    }

    CandidateReport cand;
    cand.ell = ell;
    cand.levels.reserve(levels);
    double inf_score = std::numeric_limits<double>::infinity();
    bool any_conclusive = false;
    bool gamma_stopped = false;
    bool seen_censored = false;
    double first_resolved = 0.0, last_resolved = 0.0;
    std::size_t resolved_count = 0;
    double gamma_value = 0.0, gamma_eps = eps[0];
    for (std::size_t j = 0; j < levels; ++j) {
      const auto& a = acc[j];
      EpsLevel level;
      level.eps = eps[j];
      level.count = a.count;
      level.min_member = a.min_member;
      level.empty = a.count == 0;
      level.censored = !level.empty && a.min_member > censor_bound;
      if (summable) {
        const double m = std::min(1.0, a.tail_mass);
        level.lambda_value = level.empty ? 0.0 : m;
        level.gamma_value = level.lambda_value;
      } else {
        level.lambda_value =
            level.empty ? 0.0 : tail_half_max(a.block_bins, *blocks);
        level.gamma_value =
            level.empty ? 0.0
                        : (den_total > 0.0 ? a.member_mass / den_total : 0.0);
      }
      // An empty level is decisive (the value is not eps-attained at all)
      // unless censored levels sit between it and the resolved ones; then the
      // set emptied beyond what the horizon can read, and emptiness only
      // confirms a decay the resolved trace already shows.
      bool use_level = false;
      if (level.empty) {
        const bool decaying =
            resolved_count >= 2 && last_resolved <= 0.75 * first_resolved;
        use_level = !seen_censored || decaying;
      } else if (!level.censored) {
        use_level = true;
        if (resolved_count == 0) first_resolved = level.lambda_value;
        last_resolved = level.lambda_value;
        ++resolved_count;
      } else {
        seen_censored = true;
      }
      if (use_level) {
        inf_score = std::min(inf_score, level.lambda_value);
        any_conclusive = true;
      }
      if (j + 1 == levels) cand.fine_resolved = use_level;
      // Cluster refinement stops once the horizon is exhausted.
      if (level.censored) gamma_stopped = true;
      if (!gamma_stopped) {
        gamma_value = level.gamma_value;
        gamma_eps = level.eps;
      }
      cand.levels.push_back(level);
    }

    cand.lambda_unresolved = !any_conclusive;
    cand.lambda_score = any_conclusive ? inf_score : 0.0;
    cand.lambda_member = any_conclusive && cand.lambda_score >= params.q;
    cand.gamma_score = gamma_value;
    cand.gamma_eps = gamma_eps;
    cand.gamma_member = cand.gamma_score >= report.gamma_threshold;
    report.candidates.push_back(std::move(cand));
  }
  return report;
}

// --- Diagonal construction ---------------------------------------------------

DiagonalResult diagonal_construct(const SequenceSource& x,
                                  const std::vector<DiagonalInput>& pairs,
                                  const IdealSpec& spec,
                                  const DiagonalParams& params,
                                  const BlockSequence* blocks) {
  if (pairs.empty()) throw Error("diagonal_construct: no input pairs");
  if (!(params.q > 0.0)) throw Error("diagonal_construct: q must be > 0");
  const bool norm_mode = params.criterion == MassCriterion::Norm;
  if (norm_mode && blocks == nullptr)
    throw Error("diagonal_construct: norm mode needs a block sequence");
  const std::uint64_t n = x.horizon();
  for (const auto& p : pairs) {
    if (p.set.is_empty()) throw Error("diagonal_construct: empty A_m");
    if (p.set.horizon() > n)
      throw Error("diagonal_construct: A_m horizon exceeds the sequence");
  }

  DiagonalResult result;
  result.ell_limit = pairs.back().ell;
  // Cauchy check over the tail half of (ell_m).
  for (std::size_t m = pairs.size() / 2; m < pairs.size(); ++m)
    if (std::fabs(pairs[m].ell - result.ell_limit) > params.cauchy_tol)
      throw Error("diagonal_construct: (ell_m) not Cauchy at tolerance " +
                  std::to_string(params.cauchy_tol));

  const auto& f = spec.weight();
  std::vector<std::uint64_t> members;
  std::uint64_t theta_prev = 0;
  result.complete = true;

  for (std::size_t m = 1; m <= pairs.size(); ++m) {
    const auto& a = pairs[m - 1].set;
    const double ell_m = pairs[m - 1].ell;
    const double required =
        norm_mode ? std::max(0.0, params.q - 1.0 / static_cast<double>(m))
                  : 1.0;

    // theta_m must clear max(A_{m+1} \ B_{m+1}) so the next segment only
    // carries indices already inside ell_{m+1}'s 1/(m+1)-neighborhood.
    std::uint64_t bound = theta_prev;
    if (m < pairs.size()) {
      const auto& a_next = pairs[m].set;
      const double ell_next = pairs[m].ell;
      const double eps_next = 1.0 / static_cast<double>(m + 1);
      for (std::uint64_t v : a_next.members())
        if (std::fabs(x.x(v) - ell_next) > eps_next) bound = std::max(bound, v);
    }

    // Smallest theta > bound whose segment (theta_prev, theta] carries enough
    // mass. The mass only steps up at members, so theta is either bound + 1
    // (criterion already met by the members up to the bound) or the member at
    // which the running mass first crosses the requirement.
    std::uint64_t theta = 0;
    const auto ms = a.members();
    if (norm_mode) {
      double best = 0.0, bin = 0.0;
      std::size_t k = 0;
      const auto& z = blocks->endpoints;
      bool past_bound = false;
      auto it = std::upper_bound(ms.begin(), ms.end(), theta_prev);
      for (; it != ms.end(); ++it) {
        const std::uint64_t v = *it;
        if (!past_bound && v > bound) {
          past_bound = true;
          if (best >= required) break;  // theta = bound + 1
        }
        if (v > z.front() && v <= z.back()) {
          std::size_t kk = k;
          while (v > z[kk + 1]) ++kk;
          if (kk != k) {
            bin = 0.0;
            k = kk;
          }
          bin += f(v);
          best = std::max(best, bin / blocks->prefix_mass[k + 1]);
        }
        if (past_bound && best >= required) {
          theta = v;
          break;
        }
      }
      if (theta == 0 && best >= required && bound + 1 <= n) theta = bound + 1;
    } else {
      double mass = 0.0;
      bool past_bound = false;
      auto it = std::upper_bound(ms.begin(), ms.end(), theta_prev);
      for (; it != ms.end(); ++it) {
        if (!past_bound && *it > bound) {
          past_bound = true;
          if (mass >= required) break;  // theta = bound + 1
        }
        mass += f(*it);
        if (past_bound && mass >= required) {
          theta = *it;
          break;
        }
      }
      if (theta == 0 && mass >= required && bound + 1 <= n) theta = bound + 1;
    }

    if (theta == 0) {
      result.complete = false;
      result.failed_stage = m;
      break;
    }

    DiagonalSegment seg;
    seg.stage = m;
    seg.ell = ell_m;
    seg.theta_prev = theta_prev;
    seg.theta = theta;
    seg.required = required;
    seg.envelope = 1.0 / static_cast<double>(m) +
                   std::fabs(ell_m - result.ell_limit);
    if (norm_mode)
      seg.mass = segment_block_mass(a, theta_prev, theta, *blocks);
    for (auto it = std::upper_bound(ms.begin(), ms.end(), theta_prev);
         it != ms.end() && *it <= theta; ++it) {
      members.push_back(*it);
      ++seg.member_count;
      if (!norm_mode) seg.mass += f(*it);
      seg.max_deviation =
          std::max(seg.max_deviation, std::fabs(x.x(*it) - result.ell_limit));
    }
    result.segments.push_back(seg);
    theta_prev = theta;
  }

  result.set = TruncatedSet(n, std::move(members));
  if (norm_mode) {
    if (result.set.horizon() >= blocks->last_endpoint())
      result.norm_value = norm_estimate(result.set, *blocks).value;
    result.mass_ok = result.norm_value >= params.q - params.slack;
  } else {
    result.mass_ok = true;
    for (const auto& seg : result.segments)
      if (seg.mass < seg.required) result.mass_ok = false;
  }
  // Stage 1 has no preceding theta to trim A_1 \ B_1, so the envelope claim
  // starts at stage 2.
  result.convergence_ok = true;
  for (const auto& seg : result.segments)
    if (seg.stage >= 2 && seg.max_deviation > seg.envelope + 1e-12)
      result.convergence_ok = false;
  return result;
}

}  // namespace idealtk
