#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "sawsum/geometry.hpp"
#include "sawsum/lattice.hpp"

namespace sawsum {

// Aspect parameters of the tiling parallelogram together with the number of
// interior crossing paths per half-block.
struct TessellationParams {
    long long a1 = 1;
    long long a2 = 0;
    int m = 1;

    void validate() const;
    long long crossing_len() const { return a1 + a2; }  // edges per crossing path
    long long col_height() const { return 3LL * m + 1; }  // edges per boundary column
};

enum class Side : std::uint8_t { Right = 0, Left = 1 };

inline const char* to_string(Side s) { return s == Side::Right ? "r" : "l"; }

struct BlockCoord {
    long long bx = 0;
    long long by = 0;
    friend constexpr bool operator==(BlockCoord a, BlockCoord b) {
        return a.bx == b.bx && a.by == b.by;
    }
};

struct BlockAddress {
    BlockCoord b;
    Side side = Side::Right;
    friend constexpr bool operator==(BlockAddress a, BlockAddress c) {
        return a.b == c.b && a.side == c.side;
    }
};

struct BlockCoordHash {
    std::size_t operator()(BlockCoord c) const {
        std::uint64_t h = static_cast<std::uint64_t>(c.bx) * 0x9e3779b97f4a7c15ULL;
        h ^= static_cast<std::uint64_t>(c.by) + 0xc2b2ae3d27d4eb4fULL + (h << 9) + (h >> 3);
        return static_cast<std::size_t>(h);
    }
};

struct BlockAddressHash {
    std::size_t operator()(BlockAddress a) const {
        return BlockCoordHash{}(a.b) * 2 + static_cast<std::size_t>(a.side);
    }
};

// Corner points A1..A4 of the parallelogram at block coordinate b.
std::array<Vertex, 4> parallelogram_vertices(const TessellationParams& p, BlockCoord b);

// Lattice offsets of neighboring parallelograms.
Vertex lattice_vector_right(const TessellationParams& p);  // A2
Vertex lattice_vector_up(const TessellationParams& p);     // A3

// Aspect ratio (2p_o - 1)/(2p_v - 1) for normalized sign parameters;
// zero when p_o = p_v = 1/2.
double rho(double p_o, double p_v);

struct AspectPair {
    long long a1 = 1;
    long long a2 = 0;
};

// n-th member of the tessellation sequence for the given ratio: multiples of
// the reduced fraction for rational rho, continued-fraction convergents for
// irrational rho. Both components are nondecreasing in n and satisfy
// |a2/a1 - rho| <= 1/a1^2.
AspectPair dirichlet_pair(double rho_value, int n);

// Decreasing digital segment from the origin to (a1, -a2): first and last
// steps horizontal (when feasible), every vertex within the stripe
// |y + (a2/a1) x| <= 1.
PathSeq staircase_path(long long a1, long long a2);

// Step codes of the staircase: 0 = right, 1 = down.
std::vector<std::uint8_t> staircase_steps(long long a1, long long a2);

// One half-parallelogram block: its corner geometry and the canonical path
// families (interior crossing paths, boundary columns, corner-to-corner
// transit paths).
class BlockGeometry {
public:
    BlockGeometry(TessellationParams params, BlockAddress addr);

    const TessellationParams& params() const { return params_; }
    const BlockAddress& address() const { return addr_; }
    Vertex origin() const { return origin_; }
    Vertex entry_corner() const { return origin_; }
    Vertex exit_corner() const;

    int num_crossings() const { return params_.m; }
    // Vertical offset of the i-th crossing path above the block origin, i in 1..m.
    long long crossing_offset(int i) const { return 2 + 3LL * (i - 1); }

    // Materialized paths (small-scale use; prefer the walkers in hot loops).
    PathSeq crossing_path(int i) const;            // i in 1..m
    PathSeq boundary_path(int h) const;            // h in {-1, 0, +1}
    PathSeq transit_path(int i) const;             // entry corner -> exit corner
    PathSeq entry_column_path() const { return boundary_path(0); }
    PathSeq exit_column_path() const { return boundary_path(addr_.side == Side::Right ? 1 : -1); }

    // Boundary edge sets: the entry column is shared between the two halves
    // of a parallelogram, the exit column with the neighboring one.
    std::vector<EdgeKey> entry_column_edges() const;
    std::vector<EdgeKey> exit_column_edges() const;

    // f(EdgeKey, dir) along the i-th crossing path.
    template <class F>
    void walk_crossing(int i, F&& f) const {
        Vertex pos = origin_ + Vertex{0, crossing_offset(i)};
        const auto& steps = *stair_;
        if (addr_.side == Side::Right) {
            for (std::uint8_t s : steps) {
                if (s == 0) {
                    f(EdgeKey{pos.x, pos.y, Orient::H}, +1);
                    ++pos.x;
                } else {
                    f(EdgeKey{pos.x, pos.y - 1, Orient::V}, -1);
                    --pos.y;
                }
            }
        } else {
            for (std::size_t j = steps.size(); j-- > 0;) {
                if (steps[j] == 0) {
                    f(EdgeKey{pos.x - 1, pos.y, Orient::H}, -1);
                    --pos.x;
                } else {
                    f(EdgeKey{pos.x, pos.y, Orient::V}, +1);
                    ++pos.y;
                }
            }
        }
    }

    // f(EdgeKey, dir) along the i-th transit path: up the entry column, across
    // the block, up the exit column to the exit corner.
    template <class F>
    void walk_transit(int i, F&& f) const {
        const long long c = crossing_offset(i);
        const long long M = params_.col_height();
        for (long long k = 0; k < c; ++k)
            f(EdgeKey{origin_.x, origin_.y + k, Orient::V}, +1);
        walk_crossing(i, f);
        const Vertex base = exit_column_base();
        for (long long k = c; k < M; ++k)
            f(EdgeKey{base.x, base.y + k, Orient::V}, +1);
    }

private:
    Vertex exit_column_base() const;  // bottom vertex of the exit column

    TessellationParams params_;
    BlockAddress addr_;
    Vertex origin_;
    std::shared_ptr<const std::vector<std::uint8_t>> stair_;
};

BlockGeometry block_paths(const TessellationParams& p, BlockAddress addr);

// Edges of the block, seen as closed segments inside the closed half
// parallelogram (interior_only = false) or as open segments inside its open
// interior (interior_only = true). Intended for desk-scale checks.
std::vector<EdgeKey> block_edges(const TessellationParams& p, BlockAddress addr,
                                 bool interior_only);

// Exact membership tests (integer arithmetic).
bool vertex_in_half(const TessellationParams& p, BlockAddress addr, Vertex v);
bool edge_in_block(const TessellationParams& p, BlockAddress addr, EdgeKey e,
                   bool interior_only);

// Which block contains the given point of the plane (generic points; ties on
// block boundaries resolve to an arbitrary adjacent block).
BlockAddress locate_point(const TessellationParams& p, double px, double py);

}  // namespace sawsum
