#pragma once

namespace idealtk {

inline constexpr const char* kToolName = "idealtk";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace idealtk
