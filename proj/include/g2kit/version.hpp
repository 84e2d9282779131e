#pragma once

namespace g2kit {
inline constexpr const char* kVersion = "0.1.0";
}
