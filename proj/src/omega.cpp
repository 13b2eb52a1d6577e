#include "idealtk/omega.hpp"

#include <cmath>
#include <random>

#include "idealtk/error.hpp"

namespace idealtk {

namespace {

constexpr std::uint64_t kStreamStride = 0x9e3779b97f4a7c15ull;

TruncatedSet support_of(const std::vector<std::uint8_t>& digits) {
  std::vector<std::uint64_t> members;
  for (std::uint64_t i = 0; i < digits.size(); ++i)
    if (digits[i]) members.push_back(i + 1);
  return TruncatedSet(digits.size(), std::move(members));
}

}  // namespace

OmegaSample OmegaSample::draw(std::uint64_t seed, std::uint64_t n) {
  if (n < 1) throw Error("OmegaSample::draw: n must be >= 1");
  OmegaSample s;
  s.seed = seed;
  for (std::uint32_t stream = 0;; ++stream) {
    // Digit i is the lowest bit of the i-th output of a std::mt19937_64
    // seeded with seed + stream * stride; the engine's output sequence is
    // pinned by the standard, so digit streams are portable.
    std::mt19937_64 engine(seed + stream * kStreamStride);
    s.digits.assign(n, 0);
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      s.digits[i] = static_cast<std::uint8_t>(engine() & 1ull);
      ones += s.digits[i];
    }
    if (ones == 0) continue;  // omega must select a nonempty set
    s.stream = stream;
    const double mean = static_cast<double>(ones) / static_cast<double>(n);
    s.normality_deviation = std::fabs(mean - 0.5);
    const double sigma = 0.5 / std::sqrt(static_cast<double>(n));
    s.deviation_flagged = s.normality_deviation > 4.0 * sigma;
    s.selected = support_of(s.digits);
    return s;
  }
}

OmegaSample OmegaSample::all_ones(std::uint64_t n) {
  if (n < 1) throw Error("OmegaSample::all_ones: n must be >= 1");
  OmegaSample s;
  s.digits.assign(n, 1);
  s.normality_deviation = 0.5;
  s.deviation_flagged = true;
  s.selected = support_of(s.digits);
  return s;
}

OmegaSample OmegaSample::from_digits(std::uint64_t seed,
                                     std::vector<std::uint8_t> digits) {
  if (digits.empty()) throw Error("OmegaSample::from_digits: no digits");
  OmegaSample s;
  s.seed = seed;
  s.digits = std::move(digits);
  std::uint64_t ones = 0;
  for (auto d : s.digits) ones += d != 0;
  const double mean =
      static_cast<double>(ones) / static_cast<double>(s.digits.size());
  s.normality_deviation = std::fabs(mean - 0.5);
  s.selected = support_of(s.digits);
  return s;
}

SequenceSource restrict(const SequenceSource& x, const OmegaSample& omega) {
  if (omega.digits.size() != x.horizon())
    throw Error("restrict: digit stream length " +
                std::to_string(omega.digits.size()) +
                " does not match the horizon " + std::to_string(x.horizon()));
  if (omega.selected.is_empty())
    throw Error("restrict: omega selects no indices");
  std::vector<double> values;
  values.reserve(omega.selected.size());
  for (std::uint64_t i : omega.selected.members()) values.push_back(x.x(i));
  return SequenceSource::from_values(x.kind() + "|omega", std::move(values));
}

DensityEstimate relative_density(const TruncatedSet& a, const TruncatedSet& b) {
  if (a.is_empty()) throw Error("relative_density: A is empty");
  std::vector<std::uint64_t> k_members;
  std::uint64_t k = 0;
  for (std::uint64_t v : a.members()) {
    ++k;
    if (b.contains(v)) k_members.push_back(k);
  }
  TruncatedSet k_set(a.size(), std::move(k_members));
  const auto schedule = default_schedule(a.size());
  return weighted_upper_density(k_set, WeightFunction::constant_one(),
                                schedule);
}

}  // namespace idealtk
