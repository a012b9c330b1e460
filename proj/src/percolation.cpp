#include "sawsum/percolation.hpp"

#include <cmath>
#include <unordered_set>

#include "sawsum/stats.hpp"

namespace sawsum {

BlockField::BlockField(EnvHandle env, BlockParams params, std::size_t cache_budget)
    : env_(std::move(env)), params_(params), laws_(make_block_laws(params)),
      budget_(cache_budget == 0 ? 1 : cache_budget) {}

BlockReport BlockField::compute(BlockAddress addr) const {
    const BlockGeometry geom(params_.tess(), addr);
    return classify_block(env_, geom, params_, laws_);
}

BlockReport BlockField::report(BlockAddress addr) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(addr);
        if (it != cache_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.second);
            return it->second.first;
        }
    }
    BlockReport rep = compute(addr);
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (cache_.find(addr) == cache_.end()) {
            lru_.push_front(addr);
            cache_.emplace(addr, std::make_pair(rep, lru_.begin()));
            if (cache_.size() > budget_) {
                cache_.erase(lru_.back());
                lru_.pop_back();
            }
        }
    }
    return rep;
}

bool BlockField::open(BlockAddress addr) const { return report(addr).good; }

std::size_t BlockField::cache_size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.size();
}

bool BernoulliBlockStub::open(BlockAddress addr) const {
    const U128 bits = sawmix128(seed_ ^ 0xB356B1ULL, static_cast<std::uint64_t>(addr.b.bx),
                                static_cast<std::uint64_t>(addr.b.by),
                                addr.side == Side::Right ? 0x72ULL : 0x6cULL);
    return u01_from_bits(bits.hi) < p_;
}

std::optional<std::vector<BlockAddress>> percolate_oriented(const OpenFn& open,
                                                            BlockCoord origin, int depth) {
    if (depth < 1) throw std::invalid_argument("percolate_oriented: depth >= 1");
    std::unordered_set<BlockCoord, BlockCoordHash> dead;
    std::vector<BlockAddress> path;
    path.reserve(static_cast<std::size_t>(depth));

    // Lexicographic DFS: the step index is determined by the coordinate, so a
    // coordinate that failed once can never succeed later.
    const std::function<bool(BlockCoord, int)> reach = [&](BlockCoord b, int k) -> bool {
        if (k == depth) return true;
        if (dead.count(b)) return false;
        const BlockAddress r{b, Side::Right};
        if (open(r)) {
            path.push_back(r);
            if (reach({b.bx + 1, b.by}, k + 1)) return true;
            path.pop_back();
        }
        const BlockAddress l{b, Side::Left};
        if (open(l)) {
            path.push_back(l);
            if (reach({b.bx, b.by + 1}, k + 1)) return true;
            path.pop_back();
        }
        dead.insert(b);
        return false;
    };
    if (!reach(origin, 0)) return std::nullopt;
    return path;
}

DependenceReport dependence_probe(const BlockField& field, int samples) {
    if (samples < 1000) throw std::invalid_argument("dependence_probe: samples >= 1000");
    DependenceReport out;
    out.samples = samples;

    // Density along a row of right blocks.
    {
        long long hits = 0;
        for (int i = 0; i < samples; ++i)
            if (field.open({{2LL * i, 0}, Side::Right})) ++hits;
        out.density = static_cast<double>(hits) / samples;
        out.density_se = std::sqrt(std::max(out.density * (1.0 - out.density), 1e-12) /
                                   samples);
    }
    // Same-parallelogram pairs, separated so distinct pairs are independent.
    {
        std::vector<double> a, b;
        a.reserve(static_cast<std::size_t>(samples));
        b.reserve(static_cast<std::size_t>(samples));
        for (int i = 0; i < samples; ++i) {
            const BlockCoord c{3LL * i, 1};
            a.push_back(field.open({c, Side::Right}) ? 1.0 : 0.0);
            b.push_back(field.open({c, Side::Left}) ? 1.0 : 0.0);
        }
        out.corr_adjacent = correlation(a, b);
    }
    // Disjoint blocks two lattice steps apart along a row.
    {
        std::vector<double> a, b;
        a.reserve(static_cast<std::size_t>(samples));
        b.reserve(static_cast<std::size_t>(samples));
        for (int i = 0; i < samples; ++i) {
            const BlockCoord c{6LL * i, 2};
            a.push_back(field.open({c, Side::Right}) ? 1.0 : 0.0);
            b.push_back(field.open({{c.bx + 2, c.by}, Side::Right}) ? 1.0 : 0.0);
        }
        out.corr_nonadjacent = correlation(a, b);
    }
    return out;
}

}  // namespace sawsum
