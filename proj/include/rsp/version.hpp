#pragma once

namespace rsp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rsp
