#pragma once

namespace qit {

inline constexpr const char* kToolName = "qit";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace qit
