#pragma once

#include <cstdint>
#include <unordered_map>

#include "sawsum/lattice.hpp"
#include "sawsum/law.hpp"
#include "sawsum/mixer.hpp"

namespace sawsum {

struct EdgeValue {
    double x = 0.0;
    int y = 1;  // sign in {-1,+1}
};

using OverlayMap = std::unordered_map<EdgeKey, EdgeValue, EdgeKeyHash>;

// Axis relabeling that brings the sign parameters into the normalized range
// 1/2 <= p_o <= p_v <= 1: optional sign flips per orientation class plus an
// optional swap of the two coordinates.
struct AxisTransform {
    bool flip_h = false;
    bool flip_v = false;
    bool swap_xy = false;
    bool identity() const { return !flip_h && !flip_v && !swap_xy; }
};

// The random environment (X_e, Y_e): a pure function of (seed, edge key).
// Nothing is stored; any number of threads may sample concurrently.
class EnvHandle {
public:
    EnvHandle() = default;
    EnvHandle(std::uint64_t seed, LawSpec law, OverlayMap overlays = {},
              AxisTransform transform = {});

    EdgeValue sample(EdgeKey key) const;

    // Counter-based stream for auxiliary draws tied to this environment,
    // keyed by caller-chosen words (block address, purpose tag, ...).
    RandomStream aux_stream(std::uint64_t w1, std::uint64_t w2, std::uint64_t tag) const;

    std::uint64_t seed() const { return seed_; }
    const LawSpec& law() const { return law_; }
    const OverlayMap& overlays() const { return overlays_; }
    const AxisTransform& transform() const { return transform_; }

private:
    std::uint64_t seed_ = 0;
    LawSpec law_;
    OverlayMap overlays_;
    AxisTransform transform_;
};

// Validates the law and builds a handle.
EnvHandle make_environment(std::uint64_t seed, LawSpec law, OverlayMap overlays = {});

// Opt-in normalization: returns the transform and the law with p_o/p_v
// rewritten so that 1/2 <= p_o <= p_v <= 1, leaving raw parameters available
// on the original law.
std::pair<LawSpec, AxisTransform> normalize_axes(const LawSpec& law);

// Handle sampling through the given transform.
EnvHandle make_environment(std::uint64_t seed, LawSpec law, AxisTransform transform,
                           OverlayMap overlays = {});

}  // namespace sawsum
