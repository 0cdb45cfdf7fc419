#pragma once

namespace mtbounds {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mtbounds
