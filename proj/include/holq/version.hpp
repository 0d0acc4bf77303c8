#pragma once

#include <string_view>

namespace holq {

inline constexpr std::string_view kToolName = "holq";
inline constexpr std::string_view kVersion = "1.0.0";

}  // namespace holq
