#pragma once

namespace hptml {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hptml
