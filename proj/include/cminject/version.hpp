#pragma once

namespace cminject {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cminject
