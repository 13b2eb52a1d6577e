#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace idealtk {

enum class WeightKind { ConstantOne, Power, Reciprocal, Table };

// f : N -> (0, inf). Power weights evaluate f(n) = n^alpha with alpha >= -1;
// Table weights are defined only on [1, table.size()].
class WeightFunction {
 public:
  static WeightFunction constant_one();
  static WeightFunction power(double alpha);
  static WeightFunction reciprocal();
  static WeightFunction table(std::vector<double> values);

  // Descriptor grammar: "one", "reciprocal", "power:a".
  static WeightFunction parse(std::string_view descriptor);

  double operator()(std::uint64_t n) const;

  WeightKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  std::uint64_t table_size() const { return table_.size(); }

  // True when the weight is the constant 1 for every n (covers power(0)).
  bool is_constant_one() const;

  // Exact for the closed-form kinds; a scan for tables. n0 is where the
  // "eventually" clause starts.
  bool non_increasing_from(std::uint64_t n0 = 1) const;

  // Largest n the weight is defined for (UINT64_MAX except for tables).
  std::uint64_t domain_end() const;

  std::string describe() const;

 private:
  WeightFunction(WeightKind kind, double alpha, std::vector<double> table);

  WeightKind kind_;
  double alpha_;
  std::vector<double> table_;
};

}  // namespace idealtk
