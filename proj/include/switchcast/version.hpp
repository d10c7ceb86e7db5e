#pragma once

namespace switchcast {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace switchcast
