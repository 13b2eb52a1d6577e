#include "idealtk/truncated_set.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "idealtk/error.hpp"
#include "idealtk/sequences.hpp"

namespace idealtk {

TruncatedSet::TruncatedSet(std::uint64_t horizon,
                           std::vector<std::uint64_t> members)
    : horizon_(horizon), members_(std::move(members)) {
  if (horizon_ == 0) throw Error("TruncatedSet: horizon must be >= 1");
  std::uint64_t prev = 0;
  for (std::uint64_t m : members_) {
    if (m == 0 || m > horizon_)
      throw Error("TruncatedSet: member " + std::to_string(m) +
                  " outside [1, " + std::to_string(horizon_) + "]");
    if (m <= prev)
      throw Error("TruncatedSet: members must be strictly increasing");
    prev = m;
  }
}

TruncatedSet TruncatedSet::empty(std::uint64_t horizon) {
  return TruncatedSet(horizon, {});
}

TruncatedSet TruncatedSet::all(std::uint64_t horizon) {
  std::vector<std::uint64_t> m(horizon);
  for (std::uint64_t i = 0; i < horizon; ++i) m[i] = i + 1;
  return TruncatedSet(horizon, std::move(m));
}

TruncatedSet TruncatedSet::evens(std::uint64_t horizon) {
  return multiples(2, horizon);
}

TruncatedSet TruncatedSet::multiples(std::uint64_t k, std::uint64_t horizon) {
  if (k == 0) throw Error("multiples: k must be >= 1");
  std::vector<std::uint64_t> m;
  m.reserve(horizon / k);
  for (std::uint64_t v = k; v <= horizon; v += k) m.push_back(v);
  return TruncatedSet(horizon, std::move(m));
}

TruncatedSet TruncatedSet::squares(std::uint64_t horizon) {
  std::vector<std::uint64_t> m;
  for (std::uint64_t i = 1; i * i <= horizon; ++i) m.push_back(i * i);
  return TruncatedSet(horizon, std::move(m));
}

TruncatedSet TruncatedSet::powers(std::uint64_t base, std::uint64_t horizon) {
  if (base < 2) throw Error("powers: base must be >= 2");
  std::vector<std::uint64_t> m;
  for (std::uint64_t v = base; v <= horizon; v *= base) {
    m.push_back(v);
    if (v > horizon / base) break;  // next multiply would overflow
  }
  return TruncatedSet(horizon, std::move(m));
}

std::uint64_t TruncatedSet::nth(std::size_t k) const {
  if (k == 0 || k > members_.size())
    throw Error("TruncatedSet::nth: index " + std::to_string(k) +
                " out of range (size " + std::to_string(members_.size()) + ")");
  return members_[k - 1];
}

bool TruncatedSet::contains(std::uint64_t n) const {
  return std::binary_search(members_.begin(), members_.end(), n);
}

std::uint64_t TruncatedSet::count_leq(std::uint64_t n) const {
  return static_cast<std::uint64_t>(
      std::upper_bound(members_.begin(), members_.end(), n) -
      members_.begin());
}

ComposeResult compose(const TruncatedSet& a, const TruncatedSet& b) {
  if (a.is_empty()) throw Error("compose: A is empty, no enumeration");
  const std::uint64_t limit = a.size();
  std::vector<std::uint64_t> out;
  out.reserve(b.size());
  std::size_t dropped = 0;
  for (std::uint64_t idx : b.members()) {
    if (idx > limit) {
      ++dropped;
      continue;
    }
    out.push_back(a.nth(idx));
  }
  // a_b is increasing in b, so the result is already sorted.
  return ComposeResult{TruncatedSet(a.horizon(), std::move(out)), dropped};
}

ScaleResult scale(std::uint64_t k, const TruncatedSet& a) {
  if (k == 0) throw Error("scale: k must be >= 1");
  std::vector<std::uint64_t> out;
  out.reserve(a.size());
  std::size_t dropped = 0;
  for (std::uint64_t m : a.members()) {
    if (m > a.horizon() / k) {
      ++dropped;
      continue;
    }
    out.push_back(k * m);
  }
  return ScaleResult{TruncatedSet(a.horizon(), std::move(out)), dropped};
}

DominanceResult dominates(const TruncatedSet& x, const TruncatedSet& y) {
  if (x.is_empty() || y.is_empty())
    throw Error("dominates: both sets must be nonempty");
  const std::size_t len = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < len; ++i) {
    if (x.members()[i] > y.members()[i])
      return DominanceResult{false, len, i + 1};
  }
  return DominanceResult{true, len, std::nullopt};
}

namespace {

TruncatedSet set_from_file(const std::string& path, std::uint64_t horizon) {
  std::ifstream in(path);
  if (!in) throw Error("parse_set: cannot open " + path);
  std::vector<std::uint64_t> m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    m.push_back(std::stoull(line));
  }
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return TruncatedSet(horizon, std::move(m));
}

}  // namespace

TruncatedSet parse_set(std::string_view descriptor, std::uint64_t horizon,
                       const LpfTable* lpf) {
  const std::string d(descriptor);
  const auto colon = d.find(':');
  const std::string head = colon == std::string::npos ? d : d.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : d.substr(colon + 1);

  if (head == "all" || head == "naturals") return TruncatedSet::all(horizon);
  if (head == "evens") return TruncatedSet::evens(horizon);
  if (head == "odds") {
    std::vector<std::uint64_t> m;
    for (std::uint64_t v = 1; v <= horizon; v += 2) m.push_back(v);
    return TruncatedSet(horizon, std::move(m));
  }
  if (head == "squares") return TruncatedSet::squares(horizon);
  if (head == "multiples") return TruncatedSet::multiples(std::stoull(arg), horizon);
  if (head == "powers") return TruncatedSet::powers(std::stoull(arg), horizon);
  if (head == "lpf-level") {
    if (lpf == nullptr)
      throw Error("parse_set: lpf-level needs a sieve table");
    if (lpf->horizon() < horizon)
      throw Error("parse_set: sieve table horizon too small");
    const std::uint64_t p = std::stoull(arg);
    std::vector<std::uint64_t> m;
    for (std::uint64_t n = 2; n <= horizon; ++n)
      if (lpf->lpf(n) == p) m.push_back(n);
    return TruncatedSet(horizon, std::move(m));
  }
  if (head == "file") return set_from_file(arg, horizon);
  throw Error("parse_set: unknown descriptor '" + d + "'");
}

}  // namespace idealtk
