#pragma once

namespace triphoton {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace triphoton
