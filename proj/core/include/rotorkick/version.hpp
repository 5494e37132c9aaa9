#pragma once

namespace rotorkick {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rotorkick
