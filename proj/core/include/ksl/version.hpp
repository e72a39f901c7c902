#pragma once

namespace ksl {

/// Build version string; recorded so that archived experiment outputs can be
/// tied to the code that produced them.
inline constexpr const char* version() { return "0.1.0"; }

}  // namespace ksl
