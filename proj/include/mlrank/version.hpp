#pragma once

namespace mlrank {

inline constexpr const char* kToolName = "mlrank";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kVerdictSchema = "mlrank-verdict/1";

}  // namespace mlrank
