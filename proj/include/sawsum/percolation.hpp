#pragma once

#include <functional>
#include <list>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sawsum/blocks.hpp"

namespace sawsum {

// Lazy good-block indicator field over the oriented block graph, backed by a
// bounded cache of classification reports. Values are pure functions of
// (seed, params, address); concurrent readers are safe.
class BlockField {
public:
    BlockField(EnvHandle env, BlockParams params, std::size_t cache_budget = 1 << 18);

    bool open(BlockAddress addr) const;
    BlockReport report(BlockAddress addr) const;

    const BlockParams& params() const { return params_; }
    const EnvHandle& env() const { return env_; }
    const BlockLaws& laws() const { return laws_; }
    std::size_t cache_size() const;

private:
    BlockReport compute(BlockAddress addr) const;

    EnvHandle env_;
    BlockParams params_;
    BlockLaws laws_;
    std::size_t budget_;

    mutable std::mutex mu_;
    mutable std::unordered_map<BlockAddress, std::pair<BlockReport, std::list<BlockAddress>::iterator>,
                               BlockAddressHash>
        cache_;
    mutable std::list<BlockAddress> lru_;
};

// Seeded i.i.d. block openness, for threshold sanity checks.
class BernoulliBlockStub {
public:
    BernoulliBlockStub(std::uint64_t seed, double p) : seed_(seed), p_(p) {}
    bool open(BlockAddress addr) const;

private:
    std::uint64_t seed_;
    double p_;
};

using OpenFn = std::function<bool(BlockAddress)>;

// Depth-first search for an oriented path of `depth` open blocks from the
// origin, following the successor rule b -> b + (1,0) for a right block and
// b -> b + (0,1) for a left one. Prefers the lexicographically smallest side
// sequence (right before left); failed coordinates are memoized, so the
// result matches plain exhaustive enumeration.
std::optional<std::vector<BlockAddress>> percolate_oriented(const OpenFn& open,
                                                            BlockCoord origin, int depth);

struct DependenceReport {
    int samples = 0;
    double density = 0.0;
    double density_se = 0.0;
    double corr_adjacent = 0.0;     // same-parallelogram pairs
    double corr_nonadjacent = 0.0;  // disjoint blocks along a row
};

// Density and pairwise-correlation probe of the indicator field.
DependenceReport dependence_probe(const BlockField& field, int samples);

}  // namespace sawsum
