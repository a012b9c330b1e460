#pragma once

#include <cstdint>
#include <optional>

#include "sawsum/env.hpp"
#include "sawsum/geometry.hpp"

namespace sawsum {

// Rectangle of vertices with a start (and optional target) for path search.
struct SearchBox {
    Vertex lo{0, 0};
    Vertex hi{0, 0};
    Vertex start{0, 0};
    std::optional<Vertex> target;
    int max_len = 1;

    void validate() const;
    bool contains(Vertex v) const {
        return v.x >= lo.x && v.x <= hi.x && v.y >= lo.y && v.y <= hi.y;
    }
};

struct MinimaxResult {
    double value = 0.0;
    PathSeq witness;
    bool exact = true;  // false when the node budget ran out
    std::uint64_t nodes = 0;
};

// Branch-and-bound over self-avoiding paths in the box: minimizes the
// maximal absolute prefix sum, pruning branches whose running maximum already
// reaches the incumbent. Without a target the infimum runs over paths of
// length exactly max_len; with a target over paths reaching it within
// max_len. Neighbor order is right, up, left, down; ties keep the first
// witness found.
MinimaxResult minimax_search(const EnvHandle& env, const SearchBox& box,
                             std::uint64_t node_budget = 200'000'000ULL);

// Exhaustive reference (no pruning) for small boxes.
MinimaxResult minimax_exhaustive(const EnvHandle& env, const SearchBox& box);

// Self-avoiding path of the requested length through zero-weight edges only,
// by depth-first search (neighbor order right, up, left, down).
std::optional<PathSeq> zero_path_search(const EnvHandle& env, Vertex start,
                                        long long target_length,
                                        std::uint64_t node_budget = 4'000'000ULL);

struct FlatPathOptions {
    bool materialize = false;  // keep the vertex sequence
};

struct FlatPathResult {
    double max_abs_prefix = 0.0;
    double max_abs_anchor = 0.0;  // max |S| at the on-axis anchor vertices
    long long edges = 0;
    long long cycles = 0;  // total steering-cycle repetitions
    std::optional<PathSeq> path;
};

// Explicit path from the origin to (n, 0) whose prefix sums stay within
// 6 sup|X|: advances along the axis, steering the running sum toward zero
// with repeated unit 4-cycles below the axis whenever the next edge would
// push it away. Requires a bounded law with no nonzero atoms.
FlatPathResult flat_path(const EnvHandle& env, long long n, FlatPathOptions opts = {});

// Planted configuration on the L1 ball: unit weights, signs pointing away
// from the center, so any in-ball path's sum telescopes to the change in L1
// distance.
OverlayMap plant_outward_ball(Vertex center, long long radius);

struct OutwardBallReport {
    int paths_tested = 0;
    bool all_exact = true;
    long long max_path_len = 0;
    int center_returns_checked = 0;
};

// Random in-ball walks from the center to the boundary (backtracking
// allowed); every completed walk must sum to exactly the radius, and every
// return to the center must carry sum zero.
OutwardBallReport verify_outward_ball(const EnvHandle& env, Vertex center, long long radius,
                                      int n_paths, std::uint64_t seed);

// First vertex in the box (row-major scan) whose 4 incident edges all carry
// |X| > threshold.
std::optional<Vertex> find_heavy_vertex(const EnvHandle& env, Vertex lo, Vertex hi,
                                        double threshold);

}  // namespace sawsum
