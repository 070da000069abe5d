#pragma once

namespace prodint {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace prodint
