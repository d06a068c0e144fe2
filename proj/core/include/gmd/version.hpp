#pragma once

namespace gmd {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace gmd
