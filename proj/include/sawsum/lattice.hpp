#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>

namespace sawsum {

struct Vertex {
    long long x = 0;
    long long y = 0;

    friend constexpr bool operator==(Vertex a, Vertex b) { return a.x == b.x && a.y == b.y; }
    friend constexpr bool operator!=(Vertex a, Vertex b) { return !(a == b); }
    friend constexpr Vertex operator+(Vertex a, Vertex b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vertex operator-(Vertex a, Vertex b) { return {a.x - b.x, a.y - b.y}; }
};

inline long long l1_distance(Vertex a, Vertex b) {
    return std::llabs(a.x - b.x) + std::llabs(a.y - b.y);
}

enum class Orient : std::uint8_t { H = 0, V = 1 };

// An edge of the lattice, keyed by its left (H) or bottom (V) endpoint.
struct EdgeKey {
    long long x = 0;
    long long y = 0;
    Orient orient = Orient::H;

    friend constexpr bool operator==(EdgeKey a, EdgeKey b) {
        return a.x == b.x && a.y == b.y && a.orient == b.orient;
    }
};

// A traversal of an edge: the canonical key plus the direction of crossing,
// +1 along the rightward/upward orientation, -1 against it.
struct EdgeStep {
    EdgeKey key;
    int dir = 1;
};

inline EdgeStep step_between(Vertex from, Vertex to) {
    const long long dx = to.x - from.x;
    const long long dy = to.y - from.y;
    if (dx == 1 && dy == 0) return {{from.x, from.y, Orient::H}, +1};
    if (dx == -1 && dy == 0) return {{to.x, to.y, Orient::H}, -1};
    if (dx == 0 && dy == 1) return {{from.x, from.y, Orient::V}, +1};
    if (dx == 0 && dy == -1) return {{to.x, to.y, Orient::V}, -1};
    throw std::invalid_argument("step_between: vertices are not adjacent");
}

struct VertexHash {
    std::size_t operator()(Vertex v) const {
        std::uint64_t h = static_cast<std::uint64_t>(v.x) * 0x9e3779b97f4a7c15ULL;
        h ^= static_cast<std::uint64_t>(v.y) + 0xbf58476d1ce4e5b9ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

struct EdgeKeyHash {
    std::size_t operator()(EdgeKey k) const {
        std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9e3779b97f4a7c15ULL;
        h ^= static_cast<std::uint64_t>(k.y) * 0xc2b2ae3d27d4eb4fULL + (h << 7);
        h ^= static_cast<std::uint64_t>(k.orient) + (h >> 31);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace sawsum
