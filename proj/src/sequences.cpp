#include "idealtk/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "idealtk/error.hpp"

namespace idealtk {

namespace {
constexpr char kCacheMagic[8] = {'i', 'd', 'l', 'k', 'l', 'p', 'f', '1'};
}

LpfTable LpfTable::build(std::uint64_t horizon) {
  if (horizon < 2) throw Error("LpfTable: horizon must be >= 2");
  LpfTable t;
  t.horizon_ = horizon;
  t.lpf_.assign(horizon + 1, 0);
  std::vector<std::uint32_t> primes;
  primes.reserve(static_cast<std::size_t>(
      static_cast<double>(horizon) /
      std::max(1.0, std::log(static_cast<double>(horizon)) - 1.1)));
  // Linear sieve: every composite is struck exactly once, by its least
  // prime factor.
  for (std::uint64_t i = 2; i <= horizon; ++i) {
    if (t.lpf_[i] == 0) {
      t.lpf_[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      if (p > t.lpf_[i]) break;
      const std::uint64_t v = p * i;
      if (v > horizon) break;
      t.lpf_[v] = p;
    }
  }
  return t;
}

std::uint32_t LpfTable::lpf(std::uint64_t n) const {
  if (n < 2 || n > horizon_)
    throw Error("LpfTable::lpf: n = " + std::to_string(n) +
                " outside [2, " + std::to_string(horizon_) + "]");
  return lpf_[n];
}

void LpfTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("LpfTable::save: cannot open " + path);
  out.write(kCacheMagic, sizeof(kCacheMagic));
  out.write(reinterpret_cast<const char*>(&horizon_), sizeof(horizon_));
  out.write(reinterpret_cast<const char*>(lpf_.data()),
            static_cast<std::streamsize>(lpf_.size() * sizeof(std::uint32_t)));
  if (!out) throw Error("LpfTable::save: write failed for " + path);
}

LpfTable LpfTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("LpfTable::load: cannot open " + path);
  char magic[sizeof(kCacheMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
    throw Error("LpfTable::load: bad cache file " + path);
  LpfTable t;
  in.read(reinterpret_cast<char*>(&t.horizon_), sizeof(t.horizon_));
  if (!in || t.horizon_ < 2) throw Error("LpfTable::load: bad header in " + path);
  t.lpf_.resize(t.horizon_ + 1);
  in.read(reinterpret_cast<char*>(t.lpf_.data()),
          static_cast<std::streamsize>(t.lpf_.size() * sizeof(std::uint32_t)));
  if (!in) throw Error("LpfTable::load: truncated cache file " + path);
  return t;
}

LpfTable LpfTable::load_or_build(std::uint64_t horizon,
                                 const std::string& cache_dir) {
  if (cache_dir.empty()) return build(horizon);
  std::filesystem::create_directories(cache_dir);
  const std::string path =
      (std::filesystem::path(cache_dir) /
       ("lpf_" + std::to_string(horizon) + ".bin")).string();
  if (std::filesystem::exists(path)) return load(path);
  LpfTable t = build(horizon);
  t.save(path);
  return t;
}

SequenceSource::SequenceSource(std::string kind, std::vector<double> values)
    : kind_(std::move(kind)), values_(std::move(values)) {
  if (values_.empty()) throw Error("SequenceSource: empty sequence");
  for (double v : values_)
    if (!std::isfinite(v))
      throw Error("SequenceSource: values must be finite reals");
}

SequenceSource SequenceSource::lpf(std::uint64_t horizon,
                                   const LpfTable& table) {
  if (horizon < 1) throw Error("SequenceSource::lpf: horizon must be >= 1");
  if (horizon > 1 && table.horizon() < horizon)
    throw Error("SequenceSource::lpf: sieve table too small");
  std::vector<double> v(horizon);
  v[0] = 1.0;
  for (std::uint64_t n = 2; n <= horizon; ++n)
    v[n - 1] = 1.0 / static_cast<double>(table.lpf(n));
  return SequenceSource("lpf", std::move(v));
}

SequenceSource SequenceSource::constant(double c, std::uint64_t horizon) {
  return SequenceSource("constant", std::vector<double>(horizon, c));
}

SequenceSource SequenceSource::convergent(double ell, std::uint64_t horizon) {
  std::vector<double> v(horizon);
  for (std::uint64_t n = 1; n <= horizon; ++n)
    v[n - 1] = ell + 1.0 / static_cast<double>(n);
  return SequenceSource("convergent", std::move(v));
}

SequenceSource SequenceSource::alternating(double a, double b,
                                           std::uint64_t horizon) {
  std::vector<double> v(horizon);
  for (std::uint64_t n = 1; n <= horizon; ++n) v[n - 1] = (n % 2 == 1) ? a : b;
  return SequenceSource("alternating", std::move(v));
}

SequenceSource SequenceSource::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("SequenceSource::from_file: cannot open " + path);
  std::vector<double> v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      v.push_back(std::stod(line));
    } else {
      // CSV "index,value"; the index is implicit from the line order and is
      // only sanity-checked.
      const auto idx = std::stoull(line.substr(0, comma));
      if (idx != v.size() + 1)
        throw Error("SequenceSource::from_file: index " + std::to_string(idx) +
                    " out of order in " + path);
      v.push_back(std::stod(line.substr(comma + 1)));
    }
  }
  if (v.empty()) throw Error("SequenceSource::from_file: no values in " + path);
  return SequenceSource("file", std::move(v));
}

SequenceSource SequenceSource::from_values(std::string kind,
                                           std::vector<double> values) {
  return SequenceSource(std::move(kind), std::move(values));
}

SequenceSource SequenceSource::parse(std::string_view descriptor,
                                     std::uint64_t horizon,
                                     const std::string& cache_dir) {
  const std::string d(descriptor);
  const auto colon = d.find(':');
  const std::string head = colon == std::string::npos ? d : d.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : d.substr(colon + 1);

  if (head == "lpf") {
    const LpfTable table = LpfTable::load_or_build(horizon, cache_dir);
    return lpf(horizon, table);
  }
  if (head == "constant") return constant(arg.empty() ? 0.0 : std::stod(arg), horizon);
  if (head == "convergent") return convergent(arg.empty() ? 0.0 : std::stod(arg), horizon);
  if (head == "alternating") {
    double a = 0.0, b = 1.0;
    if (!arg.empty()) {
      const auto comma = arg.find(',');
      if (comma == std::string::npos)
        throw Error("SequenceSource::parse: alternating wants 'a,b'");
      a = std::stod(arg.substr(0, comma));
      b = std::stod(arg.substr(comma + 1));
    }
    return alternating(a, b, horizon);
  }
  if (head == "file") return from_file(arg);
  throw Error("SequenceSource::parse: unknown kind '" + head + "'");
}

}  // namespace idealtk
