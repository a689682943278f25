#pragma once

namespace groupflow {

inline constexpr const char* kVersion = "1.0.0";

} // namespace groupflow
