#include "idealtk/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "idealtk/error.hpp"

namespace idealtk {

std::vector<std::uint64_t> default_schedule(std::uint64_t horizon,
                                            int points) {
  if (horizon == 0) throw Error("default_schedule: horizon must be >= 1");
  if (points < 1) throw Error("default_schedule: need at least one point");
  std::uint64_t lo = std::max<std::uint64_t>(16, horizon / 64);
  lo = std::min(lo, horizon);
  std::vector<std::uint64_t> out;
  out.reserve(points);
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(horizon));
  for (int j = 0; j < points; ++j) {
    const double t = points == 1 ? 1.0 : static_cast<double>(j) / (points - 1);
    const auto n = static_cast<std::uint64_t>(
        std::llround(std::exp(llo + t * (lhi - llo))));
    if (out.empty() || n > out.back()) out.push_back(std::max<std::uint64_t>(n, 1));
  }
  if (out.back() != horizon) out.push_back(horizon);
  return out;
}

namespace {

void validate_schedule(const TruncatedSet& s, const WeightFunction& f,
                       std::span<const std::uint64_t> schedule) {
  if (schedule.empty()) throw Error("density: empty schedule");
  if (schedule.front() < 1)
    throw Error("density: schedule points must be >= 1");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw Error("density: schedule must be strictly increasing");
  if (schedule.back() > s.horizon())
    throw Error("density: horizon " + std::to_string(s.horizon()) +
                " too small for schedule point " +
                std::to_string(schedule.back()));
  if (schedule.back() > f.domain_end())
    throw Error("density: weight undefined at schedule point " +
                std::to_string(schedule.back()));
}

}  // namespace

DensityEstimate weighted_upper_density(
    const TruncatedSet& s, const WeightFunction& f,
    std::span<const std::uint64_t> schedule) {
  validate_schedule(s, f, schedule);

  DensityEstimate est;
  est.trace.reserve(schedule.size());

  double num = 0.0, den = 0.0;
  auto member = s.members().begin();
  const auto member_end = s.members().end();
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= schedule.back(); ++n) {
    const double w = f(n);
    den += w;
    if (member != member_end && *member == n) {
      num += w;
      ++member;
    }
    if (n == schedule[next]) {
      est.trace.push_back({n, den > 0.0 ? num / den : 0.0});
      ++next;
    }
  }

  est.value = est.trace.back().ratio;
  const std::size_t tail_start = est.trace.size() / 2;
  double tmax = 0.0, tmin = 1.0;
  for (std::size_t i = tail_start; i < est.trace.size(); ++i) {
    tmax = std::max(tmax, est.trace[i].ratio);
    tmin = std::min(tmin, est.trace[i].ratio);
  }
  est.tail_max = tmax;
  est.tail_spread = tmax - tmin;
  est.converged = est.tail_spread <= 0.05 * std::max(tmax, 1e-12) ||
                  est.tail_spread <= 1e-4;
  return est;
}

DensityEstimate upper_alpha_density(const TruncatedSet& s, double alpha,
                                    std::span<const std::uint64_t> schedule) {
  return weighted_upper_density(s, WeightFunction::power(alpha), schedule);
}

DensityEstimate upper_alpha_density(const TruncatedSet& s, double alpha) {
  const auto schedule = default_schedule(s.horizon());
  return upper_alpha_density(s, alpha, schedule);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::In:
      return "in";
    case Verdict::Out:
      return "out";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

Verdict density_verdict(const DensityEstimate& est,
                        const MembershipThresholds& thresholds) {
  if (est.value >= thresholds.out_floor) return Verdict::Out;
  if (est.value <= thresholds.in_ceiling) return Verdict::In;
  return Verdict::Inconclusive;
}

std::vector<std::uint64_t> default_cutpoints(std::uint64_t horizon) {
  // Spanning sqrt(N)..N/2 separates convergent polynomial tails from
  // divergent logarithmic ones; a narrow span near N cannot.
  const auto lo = std::max<std::uint64_t>(
      2, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(horizon))));
  const std::uint64_t hi = std::max<std::uint64_t>(lo, horizon / 2);
  std::vector<std::uint64_t> out;
  const int points = 8;
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(hi));
  for (int j = 0; j < points; ++j) {
    const double t = points == 1 ? 1.0 : static_cast<double>(j) / (points - 1);
    const auto n = static_cast<std::uint64_t>(
        std::llround(std::exp(llo + t * (lhi - llo))));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

TailSumReport summable_tail(const TruncatedSet& s, const WeightFunction& f,
                            std::span<const std::uint64_t> cutpoints,
                            double flatten_threshold) {
  if (cutpoints.empty()) throw Error("summable_tail: empty cutpoints");
  for (std::size_t i = 1; i < cutpoints.size(); ++i)
    if (cutpoints[i] <= cutpoints[i - 1])
      throw Error("summable_tail: cutpoints must be strictly increasing");
  if (s.horizon() > f.domain_end())
    throw Error("summable_tail: weight undefined up to the horizon");

  TailSumReport report;
  report.cutpoints.assign(cutpoints.begin(), cutpoints.end());
  report.tails.assign(cutpoints.size(), 0.0);
  // tail(n) = total mass minus mass up to n; accumulate per cutpoint bucket.
  for (std::uint64_t m : s.members()) {
    const double w = f(m);
    for (std::size_t i = 0; i < cutpoints.size(); ++i)
      if (m > cutpoints[i]) report.tails[i] += w;
  }
  if (s.is_empty() || report.tails.front() == 0.0) {
    report.flattening_ratio = 0.0;
    report.verdict = Verdict::In;
    return report;
  }
  report.flattening_ratio = report.tails.back() / report.tails.front();
  report.verdict =
      report.flattening_ratio <= flatten_threshold ? Verdict::In : Verdict::Out;
  return report;
}

double spec_measure(const TruncatedSet& s, const IdealSpec& spec) {
  if (spec.family() == IdealFamily::Summable) {
    const std::uint64_t half = s.horizon() / 2;
    double mass = 0.0;
    const auto& f = spec.weight();
    for (auto it = s.members().rbegin();
         it != s.members().rend() && *it > half; ++it)
      mass += f(*it);
    return std::min(1.0, mass);
  }
  const auto schedule = default_schedule(s.horizon());
  return weighted_upper_density(s, spec.weight(), schedule).value;
}

Verdict spec_membership(const TruncatedSet& s, const IdealSpec& spec,
                        const MembershipThresholds& thresholds) {
  if (spec.family() == IdealFamily::Summable) {
    const auto cuts = default_cutpoints(s.horizon());
    return summable_tail(s, spec.weight(), cuts).verdict;
  }
  const auto schedule = default_schedule(s.horizon());
  return density_verdict(weighted_upper_density(s, spec.weight(), schedule),
                         thresholds);
}

StretchabilityReport stretchability_check(
    const TruncatedSet& a, const IdealSpec& spec,
    std::span<const std::uint64_t> ks, const MembershipThresholds& thresholds,
    double slack) {
  StretchabilityReport report;
  report.base_density = spec_measure(a, spec);
  report.base_verdict = spec_membership(a, spec, thresholds);
  report.conclusive = report.base_verdict == Verdict::Out;
  for (std::uint64_t k : ks) {
    auto scaled = scale(k, a);
    StretchabilityEntry entry;
    entry.k = k;
    entry.dropped = scaled.dropped;
    entry.scaled_density = spec_measure(scaled.set, spec);
    entry.bound = thresholds.out_floor / static_cast<double>(k) * (1.0 - slack);
    entry.holds = entry.scaled_density >= entry.bound;
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace idealtk
