#pragma once

namespace tfrac {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kRngId = "philox4x32-10+box-muller";

}  // namespace tfrac
