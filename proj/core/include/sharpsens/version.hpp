#pragma once

namespace sharpsens {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sharpsens
