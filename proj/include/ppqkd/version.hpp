#pragma once

namespace ppqkd {

inline constexpr const char* kToolName = "ppqkd";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace ppqkd
