#pragma once

#include <string_view>

namespace diracdfb {

inline constexpr std::string_view tool_name = "diracdfb";
inline constexpr std::string_view tool_version = "1.0.0";

}  // namespace diracdfb
