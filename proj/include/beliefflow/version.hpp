#pragma once

namespace beliefflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace beliefflow
