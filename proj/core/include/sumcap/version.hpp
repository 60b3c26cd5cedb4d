#pragma once

namespace sumcap {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sumcap
