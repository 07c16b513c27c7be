#pragma once

namespace yulefam {

inline constexpr const char* version = "0.1.0";

}  // namespace yulefam
