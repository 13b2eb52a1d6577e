#include "idealtk/weights.hpp"

#include <cmath>
#include <limits>

#include "idealtk/error.hpp"

namespace idealtk {

WeightFunction::WeightFunction(WeightKind kind, double alpha,
                               std::vector<double> table)
    : kind_(kind), alpha_(alpha), table_(std::move(table)) {}

WeightFunction WeightFunction::constant_one() {
  return WeightFunction(WeightKind::ConstantOne, 0.0, {});
}

WeightFunction WeightFunction::power(double alpha) {
  if (!(alpha >= -1.0))
    throw Error("WeightFunction::power: alpha must be >= -1");
  return WeightFunction(WeightKind::Power, alpha, {});
}

WeightFunction WeightFunction::reciprocal() {
  return WeightFunction(WeightKind::Reciprocal, -1.0, {});
}

WeightFunction WeightFunction::table(std::vector<double> values) {
  if (values.empty()) throw Error("WeightFunction::table: empty table");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error("WeightFunction::table: entries must be positive reals");
  return WeightFunction(WeightKind::Table, 0.0, std::move(values));
}

WeightFunction WeightFunction::parse(std::string_view descriptor) {
  const std::string d(descriptor);
  if (d == "one" || d == "constant-one") return constant_one();
  if (d == "reciprocal") return reciprocal();
  if (d.rfind("power:", 0) == 0) return power(std::stod(d.substr(6)));
  throw Error("WeightFunction::parse: unknown descriptor '" + d + "'");
}

double WeightFunction::operator()(std::uint64_t n) const {
  switch (kind_) {
    case WeightKind::ConstantOne:
      return 1.0;
    case WeightKind::Reciprocal:
      return 1.0 / static_cast<double>(n);
    case WeightKind::Power:
      if (alpha_ == 0.0) return 1.0;
      if (alpha_ == -1.0) return 1.0 / static_cast<double>(n);
      if (alpha_ == -0.5) return 1.0 / std::sqrt(static_cast<double>(n));
      return std::pow(static_cast<double>(n), alpha_);
    case WeightKind::Table:
      if (n == 0 || n > table_.size())
        throw Error("WeightFunction: table weight undefined at n = " +
                    std::to_string(n));
      return table_[n - 1];
  }
  return 1.0;
}

bool WeightFunction::is_constant_one() const {
  return kind_ == WeightKind::ConstantOne ||
         (kind_ == WeightKind::Power && alpha_ == 0.0);
}

bool WeightFunction::non_increasing_from(std::uint64_t n0) const {
  switch (kind_) {
    case WeightKind::ConstantOne:
    case WeightKind::Reciprocal:
      return true;
    case WeightKind::Power:
      return alpha_ <= 0.0;
    case WeightKind::Table: {
      for (std::uint64_t n = std::max<std::uint64_t>(n0, 1) + 1;
           n <= table_.size(); ++n)
        if (table_[n - 1] > table_[n - 2]) return false;
      return true;
    }
  }
  return false;
}

std::uint64_t WeightFunction::domain_end() const {
  return kind_ == WeightKind::Table
             ? static_cast<std::uint64_t>(table_.size())
             : std::numeric_limits<std::uint64_t>::max();
}

std::string WeightFunction::describe() const {
  switch (kind_) {
    case WeightKind::ConstantOne:
      return "one";
    case WeightKind::Reciprocal:
      return "reciprocal";
    case WeightKind::Power:
      return "power:" + std::to_string(alpha_);
    case WeightKind::Table:
      return "table[" + std::to_string(table_.size()) + "]";
  }
  return "?";
}

}  // namespace idealtk
