#pragma once

namespace qlens {
inline constexpr const char* kVersion = "0.1.0";
}
