#pragma once

namespace exbasis {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace exbasis
