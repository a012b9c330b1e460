#include "sawsum/env.hpp"

#include <algorithm>
#include <utility>

namespace sawsum {

namespace {
// Tag words keep the X draw, the Y draw and aux streams on disjoint keys.
constexpr std::uint64_t kTagX = 0x5853414d504c4531ULL;
constexpr std::uint64_t kTagY = 0x5953414d504c4531ULL;
constexpr std::uint64_t kTagAux = 0x4155585354524541ULL;
}  // namespace

EnvHandle::EnvHandle(std::uint64_t seed, LawSpec law, OverlayMap overlays,
                     AxisTransform transform)
    : seed_(seed), law_(std::move(law)), overlays_(std::move(overlays)), transform_(transform) {}

EdgeValue EnvHandle::sample(EdgeKey key) const {
    if (!overlays_.empty()) {
        const auto it = overlays_.find(key);
        if (it != overlays_.end()) return it->second;
    }

    EdgeKey k = key;
    if (transform_.swap_xy) k = {key.y, key.x, key.orient == Orient::H ? Orient::V : Orient::H};

    const std::uint64_t ux = static_cast<std::uint64_t>(k.x);
    const std::uint64_t uy = static_cast<std::uint64_t>(k.y);
    const std::uint64_t tagword = (k.orient == Orient::H ? 0x48ULL : 0x56ULL);

    EdgeValue out;
    // X: a per-edge stream (mixtures may need several uniforms).
    {
        const U128 base = sawmix128(seed_ ^ kTagX, ux, uy, tagword);
        RandomStream rs(base.hi, base.lo, tagword);
        out.x = law_.sample(rs);
    }
    // Y: one Bernoulli per edge. The raw probability follows the underlying
    // (possibly swapped) orientation; flips are indexed by the orientation as
    // seen by the caller.
    {
        const U128 bits = sawmix128(seed_ ^ kTagY, ux, uy, tagword);
        const double p = (k.orient == Orient::H) ? law_.p_o : law_.p_v;
        bool plus = u01_from_bits(bits.hi) < p;
        if ((key.orient == Orient::H && transform_.flip_h) ||
            (key.orient == Orient::V && transform_.flip_v))
            plus = !plus;
        out.y = plus ? 1 : -1;
    }
    return out;
}

RandomStream EnvHandle::aux_stream(std::uint64_t w1, std::uint64_t w2, std::uint64_t tag) const {
    const U128 base = sawmix128(seed_ ^ kTagAux, w1, w2, tag);
    return RandomStream(base.hi, base.lo, tag);
}

EnvHandle make_environment(std::uint64_t seed, LawSpec law, OverlayMap overlays) {
    law.validate();
    return EnvHandle(seed, std::move(law), std::move(overlays));
}

EnvHandle make_environment(std::uint64_t seed, LawSpec law, AxisTransform transform,
                           OverlayMap overlays) {
    law.validate();
    return EnvHandle(seed, std::move(law), std::move(overlays), transform);
}

std::pair<LawSpec, AxisTransform> normalize_axes(const LawSpec& law) {
    const double q_o = std::max(law.p_o, 1.0 - law.p_o);
    const double q_v = std::max(law.p_v, 1.0 - law.p_v);
    LawSpec out = law;
    AxisTransform t;
    if (q_o <= q_v) {
        t.flip_h = law.p_o < 0.5;
        t.flip_v = law.p_v < 0.5;
        out.p_o = q_o;
        out.p_v = q_v;
    } else {
        // Horizontal view edges read the raw vertical field and vice versa.
        t.swap_xy = true;
        t.flip_h = law.p_v < 0.5;
        t.flip_v = law.p_o < 0.5;
        out.p_o = q_v;
        out.p_v = q_o;
    }
    return {out, t};
}

}  // namespace sawsum
