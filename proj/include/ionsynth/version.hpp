#pragma once

namespace ionsynth {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kToolName = "ionsynth";

}  // namespace ionsynth
