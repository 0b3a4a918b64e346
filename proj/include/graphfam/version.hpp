#pragma once

namespace graphfam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace graphfam
