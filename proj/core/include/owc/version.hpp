#pragma once

namespace owc {
inline constexpr const char* kVersion = "0.1.0";
}
