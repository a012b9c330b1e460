#pragma once

namespace sawsum {

inline constexpr const char* kVersion = "0.1.0";

// Name/version of the keyed mixing function behind every environment sample.
// Echoed into every report so a run can be replayed bit-for-bit.
inline constexpr const char* kMixerVersion = "sawmix128-v1";

}  // namespace sawsum
