#pragma once

namespace turbcloud {

inline constexpr const char* kVersion = "0.1.0";

} // namespace turbcloud
