#pragma once

namespace weylvd {
inline constexpr const char* kVersion = "0.1.0";
}
