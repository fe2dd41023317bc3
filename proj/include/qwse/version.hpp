#pragma once

namespace qwse {

inline constexpr const char* version = "1.0.0";

}  // namespace qwse
