#include "sawsum/geometry.hpp"

#include <stdexcept>
#include <unordered_set>

namespace sawsum {

PathSeq PathSeq::from_vertices(std::vector<Vertex> vs) {
    for (std::size_t k = 1; k < vs.size(); ++k) {
        if (l1_distance(vs[k - 1], vs[k]) != 1)
            throw std::invalid_argument("PathSeq: consecutive vertices must be adjacent");
    }
    return PathSeq(std::move(vs));
}

bool PathSeq::is_self_avoiding() const {
    std::unordered_set<Vertex, VertexHash> seen;
    seen.reserve(vertices_.size() * 2);
    for (const Vertex& v : vertices_)
        if (!seen.insert(v).second) return false;
    return true;
}

int crossing_sign(Vertex from, Vertex to, int y) {
    const EdgeStep st = step_between(from, to);
    return st.dir * y;
}

PathSums path_sums(const PathSeq& path, const EnvHandle& env) {
    PathSums out;
    out.T.reserve(path.length());
    out.S.reserve(path.length());
    long long t = 0;
    double s = 0.0;
    path.for_each_step([&](EdgeStep st) {
        const EdgeValue ev = env.sample(st.key);
        const int z = st.dir * ev.y;
        t += z;
        s += z * ev.x;
        out.T.push_back(t);
        out.S.push_back(s);
    });
    return out;
}

PathSeq concatenate(const PathSeq& a, const PathSeq& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.last() != b.first())
        throw std::invalid_argument("concatenate: endpoint mismatch");
    std::vector<Vertex> vs;
    vs.reserve(a.num_vertices() + b.num_vertices() - 1);
    vs.insert(vs.end(), a.vertices().begin(), a.vertices().end());
    vs.insert(vs.end(), b.vertices().begin() + 1, b.vertices().end());
    return PathSeq::from_vertices(std::move(vs));
}

PathSeq reverse(const PathSeq& a) {
    std::vector<Vertex> vs(a.vertices().rbegin(), a.vertices().rend());
    return PathSeq::from_vertices(std::move(vs));
}

PathSeq translate(const PathSeq& a, Vertex by) {
    std::vector<Vertex> vs;
    vs.reserve(a.num_vertices());
    for (const Vertex& v : a.vertices()) vs.push_back(v + by);
    return PathSeq::from_vertices(std::move(vs));
}

PathSeq truncate(const PathSeq& a, std::size_t i, std::size_t j) {
    if (!(i < j && j <= a.length()))
        throw std::invalid_argument("truncate: need 0 <= i < j <= length");
    std::vector<Vertex> vs(a.vertices().begin() + static_cast<std::ptrdiff_t>(i),
                           a.vertices().begin() + static_cast<std::ptrdiff_t>(j) + 1);
    return PathSeq::from_vertices(std::move(vs));
}

PathSeq repeat_cycle(const PathSeq& a, std::size_t times) {
    if (a.first() != a.last())
        throw std::invalid_argument("repeat_cycle: path is not a cycle");
    PathSeq out = a;
    for (std::size_t i = 1; i < times; ++i) out = concatenate(out, a);
    return out;
}

}  // namespace sawsum
