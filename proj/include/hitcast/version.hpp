#pragma once

namespace hitcast {

inline constexpr const char* kVersion = "0.1.0";

} // namespace hitcast
