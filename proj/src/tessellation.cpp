#include "sawsum/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sawsum/law.hpp"

namespace sawsum {

void TessellationParams::validate() const {
    if (!(a1 > 0 && a2 >= 0 && a2 <= a1))
        throw std::invalid_argument("TessellationParams: need a1 >= a2 >= 0, a1 > 0");
    if (m < 1) throw std::invalid_argument("TessellationParams: need m >= 1");
}

std::array<Vertex, 4> parallelogram_vertices(const TessellationParams& p, BlockCoord b) {
    p.validate();
    const long long M = p.col_height();
    const Vertex shift{b.bx * p.a1 - b.by * p.a1,
                       b.bx * (M - p.a2) + b.by * (M + p.a2)};
    return {Vertex{p.a1, -p.a2} + shift, Vertex{p.a1, -p.a2 + M} + shift,
            Vertex{-p.a1, p.a2 + M} + shift, Vertex{-p.a1, p.a2} + shift};
}

Vertex lattice_vector_right(const TessellationParams& p) {
    return {p.a1, -p.a2 + p.col_height()};
}

Vertex lattice_vector_up(const TessellationParams& p) {
    return {-p.a1, p.a2 + p.col_height()};
}

double rho(double p_o, double p_v) {
    if (!(p_o >= 0.5 && p_o <= p_v && p_v <= 1.0))
        throw std::domain_error("rho: parameters must satisfy 1/2 <= p_o <= p_v <= 1");
    if (p_v == 0.5) return 0.0;
    return (2.0 * p_o - 1.0) / (2.0 * p_v - 1.0);
}

AspectPair dirichlet_pair(double rho_value, int n) {
    if (!(rho_value >= 0.0 && rho_value <= 1.0))
        throw std::domain_error("dirichlet_pair: rho outside [0,1]");
    if (n < 1) throw std::domain_error("dirichlet_pair: n >= 1 required");
    if (rho_value == 0.0) return {n, 0};

    if (auto pq = rational_approx(rho_value, 10000, 1e-12 * std::max(1.0, rho_value))) {
        return {n * pq->second, n * pq->first};
    }

    // Irrational ratio: walk the continued fraction, collecting convergents
    // with positive numerator. Denominator growth makes the Dirichlet bound
    // |a2/a1 - rho| <= 1/a1^2 automatic.
    long long p_prev = 1, q_prev = 0;
    long long p_cur = 0, q_cur = 1;  // floor(rho) = 0 for rho in (0,1)
    double frac = rho_value;
    int found = 0;
    long long last_p = 0, last_q = 1;
    for (int it = 0; it < 64; ++it) {
        if (frac == 0.0) break;
        const double inv = 1.0 / frac;
        const double aterm = std::floor(inv);
        if (aterm > 9.0e15) break;
        frac = inv - aterm;
        const long long ai = static_cast<long long>(aterm);
        const long long p_next = ai * p_cur + p_prev;
        const long long q_next = ai * q_cur + q_prev;
        if (q_next <= 0 || p_next < 0 || q_next > (1LL << 40)) break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        if (p_cur >= 1) {
            ++found;
            last_p = p_cur;
            last_q = q_cur;
            if (found == n) return {q_cur, p_cur};
        }
    }
    // The double's continued fraction terminated early: it is exactly
    // last_p/last_q, so scaling keeps the approximation error at zero.
    const long long k = n - found + 1;
    return {k * last_q, k * last_p};
}

std::vector<std::uint8_t> staircase_steps(long long a1, long long a2) {
    if (!(a1 >= 1 && a2 >= 0 && a2 <= a1))
        throw std::invalid_argument("staircase: need a1 >= 1, 0 <= a2 <= a1");
    std::vector<std::uint8_t> steps;
    steps.reserve(static_cast<std::size_t>(a1 + a2));
    if (a2 == 0) {
        steps.assign(static_cast<std::size_t>(a1), 0);
        return steps;
    }
    if (a1 == 1) {
        // Smallest admissible case; the final step cannot be horizontal here.
        steps = {0, 1};
        return steps;
    }
    // Cumulative drop before crossing from column x to x+1. ceil keeps every
    // vertex inside the stripe |y + (a2/a1) x| <= 1; the last column drops to
    // -a2 so the final step is horizontal.
    long long drop = 0;
    for (long long x = 0; x < a1; ++x) {
        const long long target =
            (x == a1 - 1) ? a2 : (a2 * (x + 1) + a1 - 1) / a1 - 1;
        for (; drop < target; ++drop) steps.push_back(1);
        steps.push_back(0);
    }
    return steps;
}

PathSeq staircase_path(long long a1, long long a2) {
    const auto steps = staircase_steps(a1, a2);
    std::vector<Vertex> vs;
    vs.reserve(steps.size() + 1);
    Vertex pos{0, 0};
    vs.push_back(pos);
    for (std::uint8_t s : steps) {
        if (s == 0)
            ++pos.x;
        else
            --pos.y;
        vs.push_back(pos);
    }
    return PathSeq::from_vertices(std::move(vs));
}

BlockGeometry::BlockGeometry(TessellationParams params, BlockAddress addr)
    : params_(params), addr_(addr) {
    params_.validate();
    const Vertex r = lattice_vector_right(params_);
    const Vertex u = lattice_vector_up(params_);
    origin_ = {addr.b.bx * r.x + addr.b.by * u.x, addr.b.bx * r.y + addr.b.by * u.y};
    stair_ = std::make_shared<const std::vector<std::uint8_t>>(
        staircase_steps(params_.a1, params_.a2));
}

Vertex BlockGeometry::exit_corner() const {
    return origin_ + (addr_.side == Side::Right ? lattice_vector_right(params_)
                                                : lattice_vector_up(params_));
}

Vertex BlockGeometry::exit_column_base() const {
    if (addr_.side == Side::Right) return origin_ + Vertex{params_.a1, -params_.a2};
    return origin_ + Vertex{-params_.a1, params_.a2};
}

PathSeq BlockGeometry::crossing_path(int i) const {
    if (i < 1 || i > params_.m) throw std::invalid_argument("crossing_path: index out of range");
    std::vector<Vertex> vs;
    vs.reserve(static_cast<std::size_t>(params_.crossing_len()) + 1);
    Vertex pos = origin_ + Vertex{0, crossing_offset(i)};
    vs.push_back(pos);
    const auto& steps = *stair_;
    if (addr_.side == Side::Right) {
        for (std::uint8_t s : steps) {
            if (s == 0)
                ++pos.x;
            else
                --pos.y;
            vs.push_back(pos);
        }
    } else {
        for (std::size_t j = steps.size(); j-- > 0;) {
            if (steps[j] == 0)
                --pos.x;
            else
                ++pos.y;
            vs.push_back(pos);
        }
    }
    return PathSeq::from_vertices(std::move(vs));
}

PathSeq BlockGeometry::boundary_path(int h) const {
    if (h < -1 || h > 1) throw std::invalid_argument("boundary_path: h in {-1,0,+1}");
    const Vertex base = origin_ + Vertex{h * params_.a1, -h * params_.a2};
    std::vector<Vertex> vs;
    const long long M = params_.col_height();
    vs.reserve(static_cast<std::size_t>(M) + 1);
    for (long long k = 0; k <= M; ++k) vs.push_back({base.x, base.y + k});
    return PathSeq::from_vertices(std::move(vs));
}

PathSeq BlockGeometry::transit_path(int i) const {
    const long long c = crossing_offset(i);
    const PathSeq entry = truncate(boundary_path(0), 0, static_cast<std::size_t>(c));
    const PathSeq exitc = exit_column_path();
    const PathSeq tail =
        truncate(exitc, static_cast<std::size_t>(c), exitc.length());
    return concatenate(concatenate(entry, crossing_path(i)), tail);
}

std::vector<EdgeKey> BlockGeometry::entry_column_edges() const {
    std::vector<EdgeKey> out;
    const long long M = params_.col_height();
    out.reserve(static_cast<std::size_t>(M));
    for (long long k = 0; k < M; ++k) out.push_back({origin_.x, origin_.y + k, Orient::V});
    return out;
}

std::vector<EdgeKey> BlockGeometry::exit_column_edges() const {
    std::vector<EdgeKey> out;
    const Vertex base = exit_column_base();
    const long long M = params_.col_height();
    out.reserve(static_cast<std::size_t>(M));
    for (long long k = 0; k < M; ++k) out.push_back({base.x, base.y + k, Orient::V});
    return out;
}

BlockGeometry block_paths(const TessellationParams& p, BlockAddress addr) {
    return BlockGeometry(p, addr);
}

namespace {

struct HalfFrame {
    // Local frame of the half block: x in [x_lo, x_hi], band value
    // a1*y + a2*x in [band_lo, band_hi] relative to the block origin.
    long long ox, oy, a1, a2, M;
    Side side;

    // Band and column tests in doubled local coordinates (so edge midpoints
    // are exact).
    bool contains2(long long px2, long long py2, bool strict) const {
        const long long lx2 = px2 - 2 * ox;
        const long long ly2 = py2 - 2 * oy;
        const long long xlo = side == Side::Right ? 0 : -2 * a1;
        const long long xhi = side == Side::Right ? 2 * a1 : 0;
        const long long band = a1 * ly2 + a2 * lx2;
        if (strict)
            return lx2 > xlo && lx2 < xhi && band > 0 && band < 2 * a1 * M;
        return lx2 >= xlo && lx2 <= xhi && band >= 0 && band <= 2 * a1 * M;
    }
};

HalfFrame make_frame(const TessellationParams& p, BlockAddress addr) {
    const BlockGeometry g(p, addr);
    return {g.origin().x, g.origin().y, p.a1, p.a2, p.col_height(), addr.side};
}

}  // namespace

bool vertex_in_half(const TessellationParams& p, BlockAddress addr, Vertex v) {
    return make_frame(p, addr).contains2(2 * v.x, 2 * v.y, false);
}

bool edge_in_block(const TessellationParams& p, BlockAddress addr, EdgeKey e,
                   bool interior_only) {
    const HalfFrame f = make_frame(p, addr);
    const Vertex a{e.x, e.y};
    const Vertex b = e.orient == Orient::H ? Vertex{e.x + 1, e.y} : Vertex{e.x, e.y + 1};
    if (!f.contains2(2 * a.x, 2 * a.y, false) || !f.contains2(2 * b.x, 2 * b.y, false))
        return false;
    if (!interior_only) return true;
    // Open segment in the open interior: endpoints in the closure plus a
    // strictly interior midpoint suffice for a convex region.
    return f.contains2(a.x + b.x, a.y + b.y, true);
}

std::vector<EdgeKey> block_edges(const TessellationParams& p, BlockAddress addr,
                                 bool interior_only) {
    const auto corners = parallelogram_vertices(p, addr.b);
    long long xlo = corners[0].x, xhi = corners[0].x;
    long long ylo = corners[0].y, yhi = corners[0].y;
    for (const Vertex& c : corners) {
        xlo = std::min(xlo, c.x);
        xhi = std::max(xhi, c.x);
        ylo = std::min(ylo, c.y);
        yhi = std::max(yhi, c.y);
    }
    std::vector<EdgeKey> out;
    for (long long x = xlo - 1; x <= xhi + 1; ++x) {
        for (long long y = ylo - 1; y <= yhi + 1; ++y) {
            for (Orient o : {Orient::H, Orient::V}) {
                const EdgeKey e{x, y, o};
                if (edge_in_block(p, addr, e, interior_only)) out.push_back(e);
            }
        }
    }
    return out;
}

BlockAddress locate_point(const TessellationParams& p, double px, double py) {
    const Vertex r = lattice_vector_right(p);
    const Vertex u = lattice_vector_up(p);
    const double det = static_cast<double>(r.x) * u.y - static_cast<double>(r.y) * u.x;
    const double alpha = (px * u.y - py * u.x) / det;
    const double beta = (py * r.x - px * r.y) / det;
    const long long bx0 = static_cast<long long>(std::llround(alpha));
    const long long by0 = static_cast<long long>(std::llround(beta));
    for (long long dbx = -2; dbx <= 2; ++dbx) {
        for (long long dby = -2; dby <= 2; ++dby) {
            const BlockCoord b{bx0 + dbx, by0 + dby};
            const double ox = static_cast<double>(b.bx * r.x + b.by * u.x);
            const double oy = static_cast<double>(b.bx * r.y + b.by * u.y);
            const double lx = px - ox, ly = py - oy;
            const double band = static_cast<double>(p.a1) * ly + static_cast<double>(p.a2) * lx;
            if (lx >= -static_cast<double>(p.a1) && lx <= static_cast<double>(p.a1) &&
                band >= 0.0 && band <= static_cast<double>(p.a1) * static_cast<double>(p.col_height())) {
                return {b, lx >= 0.0 ? Side::Right : Side::Left};
            }
        }
    }
    throw std::runtime_error("locate_point: no containing block found");
}

}  // namespace sawsum
