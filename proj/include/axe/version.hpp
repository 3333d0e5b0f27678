#pragma once

namespace axe {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace axe
