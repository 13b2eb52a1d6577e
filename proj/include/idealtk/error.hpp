#pragma once

#include <stdexcept>
#include <string>

namespace idealtk {

// Precondition violations and unusable inputs throw this; the CLI maps it
// to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace idealtk
