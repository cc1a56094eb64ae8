#pragma once

namespace rsou {
inline constexpr const char* kToolVersion = "0.1.0";
}
