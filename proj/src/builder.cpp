#include "sawsum/builder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace sawsum {

namespace {

struct EmitState {
    const BoundedPathOptions* opts;
    BoundedPathResult* res;
    double running = 0.0;
    double guard_2k3 = 0.0;
    bool guard_active = false;
    std::unordered_set<Vertex, VertexHash> seen;
    Vertex cursor{0, 0};

    void start(Vertex v) {
        cursor = v;
        if (opts->check_self_avoiding) seen.insert(v);
        if (res->vertices.size() < opts->dump_vertices) res->vertices.push_back(v);
    }

    void emit(Vertex to, double zx) {
        running += zx;
        ++res->edges;
        const double a = std::fabs(running);
        if (a > res->max_abs_prefix) res->max_abs_prefix = a;
        if (guard_active && a > guard_2k3) {
            ++res->violations_prefix;
            guard_active = false;  // one count per excursion
        }
        if (opts->check_self_avoiding && !seen.insert(to).second) res->self_avoiding = false;
        if (res->vertices.size() < opts->dump_vertices) res->vertices.push_back(to);
        if (opts->edge_sink) opts->edge_sink(cursor, to);
        cursor = to;
    }
};

}  // namespace

BoundedPathResult build_bounded_path(const EnvHandle& env, const BlockParams& params,
                                     const BlockLaws& laws,
                                     std::span<const BlockAddress> block_path, int steps,
                                     const BoundedPathOptions& opts) {
    if (steps < 0 || static_cast<std::size_t>(steps) > block_path.size())
        throw std::invalid_argument("build_bounded_path: steps exceeds the block path");
    const TessellationParams tess = params.tess();
    const long long M = tess.col_height();
    const double K3 = params.K3();

    BoundedPathResult res;
    EmitState st{&opts, &res};

    // Optional vertical prefix up the y-axis to the entry corner of block
    // (h, h); its signed sum seeds the recursion.
    Vertex start{0, 0};
    if (opts.vertical_prefix_h > 0) {
        if (block_path.empty() ||
            !(block_path[0].b == BlockCoord{opts.vertical_prefix_h, opts.vertical_prefix_h}))
            throw std::invalid_argument(
                "build_bounded_path: a vertical prefix of height h must continue at block (h,h)");
    } else if (!block_path.empty()) {
        start = BlockGeometry(tess, block_path[0]).entry_corner();
    }
    st.start(start);

    double s = 0.0;
    if (opts.vertical_prefix_h > 0) {
        const long long rise = 2 * M * static_cast<long long>(opts.vertical_prefix_h);
        for (long long k = 0; k < rise; ++k) {
            const EdgeKey e{0, k, Orient::V};
            const EdgeValue ev = env.sample(e);
            s += ev.y * ev.x;
            st.emit({0, k + 1}, ev.y * ev.x);
        }
        res.prefix_edges = rise;
    }
    res.s0 = s;
    res.exit_sums.push_back(s);
    res.max_abs_exit = std::fabs(s);

    for (int k = 0; k < steps; ++k) {
        const BlockAddress addr = block_path[static_cast<std::size_t>(k)];
        if (k > 0) {
            const BlockAddress prev = block_path[static_cast<std::size_t>(k - 1)];
            const BlockCoord expect{prev.b.bx + (prev.side == Side::Right ? 1 : 0),
                                    prev.b.by + (prev.side == Side::Left ? 1 : 0)};
            if (!(addr.b == expect))
                throw std::invalid_argument("build_bounded_path: successor rule violated");
        }
        const BlockGeometry geom(tess, addr);
        const BlockReport rep = classify_block(env, geom, params, laws);
        if (!rep.good) {
            std::ostringstream os;
            os << "build_bounded_path: block (" << addr.b.bx << "," << addr.b.by << ","
               << to_string(addr.side) << ") is not good";
            throw ConstructionError(os.str());
        }

        // A positive sum concatenates the minimal path, otherwise the maximal
        // one (the sign of zero counts as negative).
        const int i = s > 0.0 ? rep.i_min : rep.i_max;

        st.guard_2k3 = 2.0 * K3;
        st.guard_active = std::fabs(s) <= K3;

        double block_sum = 0.0;
        Vertex pos = geom.entry_corner();
        geom.walk_transit(i, [&](EdgeKey key, int dir) {
            const EdgeValue ev = env.sample(key);
            const double zx = dir * ev.y * ev.x;
            block_sum += zx;
            pos = dir > 0 ? (key.orient == Orient::H ? Vertex{key.x + 1, key.y}
                                                     : Vertex{key.x, key.y + 1})
                          : Vertex{key.x, key.y};
            st.emit(pos, zx);
        });

        const double s_prev = s;
        s += block_sum;
        res.exit_sums.push_back(s);
        ++res.blocks_built;
        res.max_abs_exit = std::max(res.max_abs_exit, std::fabs(s));
        if (std::fabs(s_prev) <= K3 && std::fabs(s) > K3) ++res.violations_exit;
        if (!(pos == geom.exit_corner()))
            throw std::logic_error("build_bounded_path: transit did not reach the exit corner");
    }
    if (!opts.collect_exit_sums) res.exit_sums.clear();
    return res;
}

BoundedPathResult build_bounded_path(const BlockField& field,
                                     std::span<const BlockAddress> block_path, int steps,
                                     const BoundedPathOptions& opts) {
    return build_bounded_path(field.env(), field.params(), field.laws(), block_path, steps,
                              opts);
}

IncrementLaws IncrementLaws::constants(double zeta_minus, double zeta_plus) {
    if (!(zeta_minus > 0.0 && zeta_plus > 0.0))
        throw std::invalid_argument("IncrementLaws: increments must be positive");
    IncrementLaws out;
    out.minus_draw = [zeta_minus](RandomStream&) { return zeta_minus; };
    out.plus_draw = [zeta_plus](RandomStream&) { return zeta_plus; };
    std::ostringstream os;
    os << "constants(" << zeta_minus << "," << zeta_plus << ")";
    out.description = os.str();
    return out;
}

IncrementLaws IncrementLaws::atom_sets(std::vector<double> minus_vals,
                                       std::vector<double> plus_vals) {
    if (minus_vals.empty() || plus_vals.empty())
        throw std::invalid_argument("IncrementLaws: empty atom set");
    for (double v : minus_vals)
        if (!(v > 0.0)) throw std::invalid_argument("IncrementLaws: increments must be positive");
    for (double v : plus_vals)
        if (!(v > 0.0)) throw std::invalid_argument("IncrementLaws: increments must be positive");
    IncrementLaws out;
    out.minus_draw = [vals = std::move(minus_vals)](RandomStream& rs) {
        return vals[static_cast<std::size_t>(rs.next_u01() * static_cast<double>(vals.size()))];
    };
    out.plus_draw = [vals = std::move(plus_vals)](RandomStream& rs) {
        return vals[static_cast<std::size_t>(rs.next_u01() * static_cast<double>(vals.size()))];
    };
    out.description = "atom_sets";
    return out;
}

IncrementLaws IncrementLaws::from_samples(std::vector<double> minus_samples,
                                          std::vector<double> plus_samples) {
    IncrementLaws out = atom_sets(std::move(minus_samples), std::move(plus_samples));
    out.description = "empirical";
    return out;
}

IncrementLaws IncrementLaws::from_law(const LawSpec& minus_law, const LawSpec& plus_law) {
    minus_law.validate();
    plus_law.validate();
    if (minus_law.cdf(0.0) > 0.0 || plus_law.cdf(0.0) > 0.0)
        throw std::invalid_argument("IncrementLaws: laws must be positive-valued");
    IncrementLaws out;
    out.minus_draw = [l = minus_law](RandomStream& rs) { return l.sample(rs); };
    out.plus_draw = [l = plus_law](RandomStream& rs) { return l.sample(rs); };
    out.description = "law(" + minus_law.describe() + "," + plus_law.describe() + ")";
    return out;
}

std::vector<double> simulate_chain(const IncrementLaws& laws, double x0, long long steps,
                                   RandomStream& rs) {
    if (steps < 1) throw std::invalid_argument("simulate_chain: steps >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(steps));
    double s = x0;
    for (long long k = 0; k < steps; ++k) {
        if (s > 0.0)
            s -= laws.minus_draw(rs);
        else
            s += laws.plus_draw(rs);
        out.push_back(s);
    }
    return out;
}

RecurrenceStats recurrence_stats(std::span<const double> s, double eps,
                                 std::size_t max_times) {
    RecurrenceStats out;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double v = s[k];
        if (v == 0.0) {
            ++out.zero_returns;
            if (!out.first_zero_time) out.first_zero_time = static_cast<long long>(k + 1);
        }
        if (std::fabs(v) <= eps) {
            ++out.eps_hits;
            if (!out.first_eps_time) out.first_eps_time = static_cast<long long>(k + 1);
            if (out.hit_times.size() < max_times)
                out.hit_times.push_back(static_cast<long long>(k + 1));
        }
    }
    return out;
}

double induced_map_eval(double theta, double w) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::domain_error("induced_map_eval: theta in (0,1)");
    if (!(w > 0.0 && w <= 1.0)) throw std::domain_error("induced_map_eval: w in (0,1]");
    return w <= theta ? 1.0 - theta + w : w - theta;
}

RotationOrbit rotation_orbit(double theta, double w0, int n_points) {
    if (n_points < 1) throw std::invalid_argument("rotation_orbit: n_points >= 1");
    RotationOrbit out;
    out.points.reserve(static_cast<std::size_t>(n_points));
    double w = w0;
    for (int k = 0; k < n_points; ++k) {
        out.points.push_back(w);
        w = induced_map_eval(theta, w);
    }
    std::vector<double> sorted = out.points;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> gaps;
    gaps.reserve(sorted.size());
    for (std::size_t i = 1; i < sorted.size(); ++i) gaps.push_back(sorted[i] - sorted[i - 1]);
    gaps.push_back(sorted.front() + 1.0 - sorted.back());  // wrap around the circle
    out.max_gap = *std::max_element(gaps.begin(), gaps.end());
    std::sort(gaps.begin(), gaps.end());
    int distinct = gaps.empty() ? 0 : 1;
    for (std::size_t i = 1; i < gaps.size(); ++i)
        if (gaps[i] - gaps[i - 1] > 1e-9) ++distinct;
    out.distinct_gaps = distinct;
    return out;
}

std::vector<double> schedule_zero_sum(std::vector<double> adds, std::vector<double> subs) {
    double y0 = 0.0;
    for (double v : subs) y0 += v;
    for (double v : adds) y0 -= v;
    std::vector<double> traj;
    traj.reserve(adds.size() + subs.size());
    double s = y0;
    std::size_t ia = 0, is = 0;
    while (ia < adds.size() || is < subs.size()) {
        if (s > 0.0) {
            if (is == subs.size())
                throw std::logic_error("schedule_zero_sum: positive sum with no subtrahend left");
            s -= subs[is++];
        } else {
            if (ia == adds.size())
                throw std::logic_error("schedule_zero_sum: nonpositive sum with no addend left");
            s += adds[ia++];
        }
        traj.push_back(s);
    }
    return traj;
}

std::vector<double> perturbed_two_value_orbit(double xbar, double ybar, double z,
                                              std::span<const double> us) {
    std::vector<double> out;
    out.reserve(us.size() + 1);
    double w = z;
    out.push_back(w);
    for (double u : us) {
        if (w > 0.0)
            w -= xbar + u;
        else
            w += ybar + u;
        out.push_back(w);
    }
    return out;
}

GoodBlockIncrements sample_good_block_increments(const BlockParams& params, const LawSpec& law,
                                                 const BlockLaws& laws, int want,
                                                 std::uint64_t seed) {
    GoodBlockIncrements out;
    RandomStream rs(seed, 0x60D0B10CULL, 0);
    const int max_tries = want * 1000 + 1000;
    while (static_cast<int>(out.plus_samples.size()) < want && out.blocks_tried < max_tries) {
        ++out.blocks_tried;
        const SyntheticBlock b = simulate_synthetic_block(params, law, laws, rs);
        if (!b.good) continue;
        out.minus_samples.push_back(-b.transit_sum_min);
        out.plus_samples.push_back(b.transit_sum_max);
    }
    return out;
}

}  // namespace sawsum
