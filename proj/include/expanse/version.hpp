#pragma once

namespace expanse {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace expanse
