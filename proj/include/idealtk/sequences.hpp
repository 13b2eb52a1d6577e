#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace idealtk {

// Least prime factors for 2..N from a linear sieve; cacheable to disk since
// sieving dominates cold-start time at large horizons.
class LpfTable {
 public:
  static LpfTable build(std::uint64_t horizon);

  // Loads "lpf_<N>.bin" from cache_dir when present, otherwise builds and
  // writes it. Empty cache_dir skips caching entirely.
  static LpfTable load_or_build(std::uint64_t horizon,
                                const std::string& cache_dir);

  static LpfTable load(const std::string& path);
  void save(const std::string& path) const;

  std::uint64_t horizon() const { return horizon_; }
  std::uint32_t lpf(std::uint64_t n) const;

 private:
  LpfTable() = default;

  std::uint64_t horizon_ = 0;
  std::vector<std::uint32_t> lpf_;  // index n, valid for 2 <= n <= horizon
};

// A real-valued sequence x_1..x_N under study.
class SequenceSource {
 public:
  // x_1 = 1, x_n = 1 / lpf(n). The table must cover the horizon.
  static SequenceSource lpf(std::uint64_t horizon, const LpfTable& table);
  static SequenceSource constant(double c, std::uint64_t horizon);
  // x_n = ell + 1/n; converges to ell with Lambda = Gamma = {ell}.
  static SequenceSource convergent(double ell, std::uint64_t horizon);
  // x_n alternates a, b, a, b, ...: two accumulation points with
  // density-1/2 level sets.
  static SequenceSource alternating(double a, double b, std::uint64_t horizon);
  // Newline-separated decimal reals, or CSV lines "index,value".
  static SequenceSource from_file(const std::string& path);
  static SequenceSource from_values(std::string kind,
                                    std::vector<double> values);

  // "lpf", "constant:c", "convergent:l", "alternating:a,b", "file:path".
  // horizon is ignored for file sources (the file defines it); cache_dir
  // feeds the sieve cache for "lpf".
  static SequenceSource parse(std::string_view descriptor,
                              std::uint64_t horizon,
                              const std::string& cache_dir = "");

  std::uint64_t horizon() const { return values_.size(); }
  double x(std::uint64_t n) const { return values_[n - 1]; }
  const std::vector<double>& values() const { return values_; }
  const std::string& kind() const { return kind_; }

 private:
  SequenceSource(std::string kind, std::vector<double> values);

  std::string kind_;
  std::vector<double> values_;  // values_[i] = x_{i+1}
};

}  // namespace idealtk
