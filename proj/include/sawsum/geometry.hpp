#pragma once

#include <cstddef>
#include <vector>

#include "sawsum/env.hpp"
#include "sawsum/lattice.hpp"

namespace sawsum {

// A finite lattice path given by its vertex sequence; consecutive vertices
// are at L1 distance 1. Immutable after construction.
class PathSeq {
public:
    PathSeq() = default;

    // Validates adjacency of consecutive vertices.
    static PathSeq from_vertices(std::vector<Vertex> vs);

    std::size_t num_vertices() const { return vertices_.size(); }
    // Number of edges.
    std::size_t length() const { return vertices_.empty() ? 0 : vertices_.size() - 1; }
    bool empty() const { return vertices_.size() < 2; }

    const Vertex& vertex(std::size_t i) const { return vertices_[i]; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    Vertex first() const { return vertices_.front(); }
    Vertex last() const { return vertices_.back(); }

    // All vertices distinct; recomputed on demand.
    bool is_self_avoiding() const;

    template <class F>
    void for_each_step(F&& f) const {  // f(EdgeStep)
        for (std::size_t k = 1; k < vertices_.size(); ++k)
            f(step_between(vertices_[k - 1], vertices_[k]));
    }

private:
    explicit PathSeq(std::vector<Vertex> vs) : vertices_(std::move(vs)) {}
    std::vector<Vertex> vertices_;
};

// Crossing sign of a single step under edge sign y: +y when the step goes
// rightward/upward, -y otherwise.
int crossing_sign(Vertex from, Vertex to, int y);

struct PathSums {
    std::vector<long long> T;  // running crossing totals
    std::vector<double> S;     // running signed weight sums
};

// Prefix sums along the path in the given environment; S_0 = 0 by convention
// and the arrays have one entry per edge.
PathSums path_sums(const PathSeq& path, const EnvHandle& env);

// Endpoint-joined concatenation; throws when a ends elsewhere than b starts.
PathSeq concatenate(const PathSeq& a, const PathSeq& b);

PathSeq reverse(const PathSeq& a);

PathSeq translate(const PathSeq& a, Vertex by);

// Keeps vertices i..j inclusive; requires 0 <= i < j <= length().
PathSeq truncate(const PathSeq& a, std::size_t i, std::size_t j);

// Cycle a repeated i times (a must be a cycle).
PathSeq repeat_cycle(const PathSeq& a, std::size_t times);

}  // namespace sawsum
