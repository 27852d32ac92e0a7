#pragma once

namespace tlkm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tlkm
