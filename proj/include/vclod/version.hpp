#pragma once

namespace vclod {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "vclod";

} // namespace vclod
