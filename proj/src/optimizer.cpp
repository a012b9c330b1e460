#include "sawsum/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "sawsum/builder.hpp"

namespace sawsum {

void SearchBox::validate() const {
    if (!(lo.x <= hi.x && lo.y <= hi.y)) throw std::invalid_argument("SearchBox: empty box");
    if (!contains(start)) throw std::invalid_argument("SearchBox: start outside the box");
    if (target && !contains(*target))
        throw std::invalid_argument("SearchBox: target outside the box");
    if (max_len < 1) throw std::invalid_argument("SearchBox: max_len >= 1");
}

namespace {

constexpr Vertex kDirs[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // right, up, left, down

struct BoxGrid {
    Vertex lo;
    long long w, h;
    std::vector<char> visited;

    explicit BoxGrid(const SearchBox& box)
        : lo(box.lo), w(box.hi.x - box.lo.x + 1), h(box.hi.y - box.lo.y + 1),
          visited(static_cast<std::size_t>(w * h), 0) {}

    std::size_t idx(Vertex v) const {
        return static_cast<std::size_t>((v.x - lo.x) + w * (v.y - lo.y));
    }
};

struct MinimaxSearcher {
    const EnvHandle& env;
    const SearchBox& box;
    std::uint64_t budget;
    BoxGrid grid;
    std::vector<Vertex> current;
    std::vector<Vertex> best;
    double best_value = std::numeric_limits<double>::infinity();
    std::uint64_t nodes = 0;
    bool exhausted = false;
    bool prune = true;

    MinimaxSearcher(const EnvHandle& e, const SearchBox& b, std::uint64_t budget_, bool prune_)
        : env(e), box(b), budget(budget_), grid(b), prune(prune_) {}

    void dfs(Vertex pos, double sum, double cur_max) {
        if (++nodes > budget) {
            exhausted = true;
            return;
        }
        const std::size_t len = current.size() - 1;
        if (box.target) {
            if (pos == *box.target) {
                if (cur_max < best_value) {
                    best_value = cur_max;
                    best = current;
                }
                return;  // extending past the target cannot improve this path
            }
            if (static_cast<long long>(box.max_len - len) < l1_distance(pos, *box.target))
                return;
        } else if (len == static_cast<std::size_t>(box.max_len)) {
            if (cur_max < best_value) {
                best_value = cur_max;
                best = current;
            }
            return;
        }
        for (const Vertex d : kDirs) {
            const Vertex nxt = pos + d;
            if (!box.contains(nxt)) continue;
            const std::size_t vi = grid.idx(nxt);
            if (grid.visited[vi]) continue;
            const EdgeStep st = step_between(pos, nxt);
            const EdgeValue ev = env.sample(st.key);
            const double s2 = sum + st.dir * ev.y * ev.x;
            const double m2 = std::max(cur_max, std::fabs(s2));
            if (prune && m2 >= best_value) continue;
            if (!prune && m2 > best_value) {
                // the exhaustive reference still skips strictly worse branches
            }
            grid.visited[vi] = 1;
            current.push_back(nxt);
            dfs(nxt, s2, m2);
            current.pop_back();
            grid.visited[vi] = 0;
            if (exhausted) return;
        }
    }
};

MinimaxResult run_minimax(const EnvHandle& env, const SearchBox& box, std::uint64_t budget,
                          bool prune) {
    box.validate();
    MinimaxResult out;
    if (box.target && *box.target == box.start) {
        out.value = 0.0;
        out.witness = PathSeq::from_vertices({box.start});
        return out;
    }
    MinimaxSearcher s(env, box, budget, prune);
    s.grid.visited[s.grid.idx(box.start)] = 1;
    s.current.push_back(box.start);
    s.dfs(box.start, 0.0, 0.0);
    out.nodes = s.nodes;
    out.exact = !s.exhausted;
    if (s.best.empty()) {
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.value = s.best_value;
    out.witness = PathSeq::from_vertices(s.best);
    return out;
}

}  // namespace

MinimaxResult minimax_search(const EnvHandle& env, const SearchBox& box,
                             std::uint64_t node_budget) {
    return run_minimax(env, box, node_budget, true);
}

MinimaxResult minimax_exhaustive(const EnvHandle& env, const SearchBox& box) {
    return run_minimax(env, box, std::numeric_limits<std::uint64_t>::max(), false);
}

std::optional<PathSeq> zero_path_search(const EnvHandle& env, Vertex start,
                                        long long target_length, std::uint64_t node_budget) {
    if (target_length < 0) throw std::invalid_argument("zero_path_search: length >= 0");
    if (target_length == 0) return PathSeq::from_vertices({start});

    std::unordered_set<Vertex, VertexHash> on_path{start};
    std::vector<Vertex> path{start};
    std::vector<int> next_dir{0};
    std::uint64_t nodes = 0;

    while (!next_dir.empty()) {
        if (static_cast<long long>(path.size()) - 1 == target_length)
            return PathSeq::from_vertices(path);
        int& d = next_dir.back();
        if (d == 4) {
            next_dir.pop_back();
            on_path.erase(path.back());
            path.pop_back();
            continue;
        }
        const Vertex pos = path.back();
        const Vertex nxt = pos + kDirs[d++];
        if (on_path.count(nxt)) continue;
        if (++nodes > node_budget) return std::nullopt;
        const EdgeStep st = step_between(pos, nxt);
        if (env.sample(st.key).x != 0.0) continue;
        path.push_back(nxt);
        on_path.insert(nxt);
        next_dir.push_back(0);
    }
    return std::nullopt;
}

namespace {

// Signed contribution of one step for flat-path bookkeeping.
double step_value(const EnvHandle& env, Vertex from, Vertex to) {
    const EdgeStep st = step_between(from, to);
    const EdgeValue ev = env.sample(st.key);
    return st.dir * ev.y * ev.x;
}

}  // namespace

FlatPathResult flat_path(const EnvHandle& env, long long n, FlatPathOptions opts) {
    if (n < 1) throw std::invalid_argument("flat_path: n >= 1");
    const LawSpec& law = env.law();
    const auto sup = law.sup_abs();
    if (!sup)
        throw std::invalid_argument("flat_path: law must have bounded support");
    if (!law.is_delta_zero() && law.has_nonzero_atom())
        throw std::invalid_argument("flat_path: law must have no atoms away from zero");
    const double cbar = *sup;
    const double anchor_tol = 4.0 * cbar + 1e-9 * std::max(1.0, cbar);

    FlatPathResult res;
    std::vector<Vertex> verts;
    if (opts.materialize) verts.push_back({0, 0});

    double s = 0.0;
    const auto emit = [&](Vertex from, Vertex to) {
        s += step_value(env, from, to);
        ++res.edges;
        res.max_abs_prefix = std::max(res.max_abs_prefix, std::fabs(s));
        if (opts.materialize) verts.push_back(to);
    };

    // first edge straight along the axis
    emit({0, 0}, {1, 0});
    res.max_abs_anchor = std::fabs(s);

    for (long long k = 1; k < n; ++k) {
        const Vertex here{k, 0};
        const Vertex next{k + 1, 0};
        const double w = step_value(env, here, next);
        if (w * s > 0.0) {
            // Steering cycle below the axis, traversed in the direction that
            // pulls the sum toward zero.
            const Vertex cyc_fwd[5] = {here, next, {k + 1, -1}, {k, -1}, here};
            double cyc_sum = 0.0;
            double part[4];
            for (int i = 0; i < 4; ++i) {
                cyc_sum += step_value(env, cyc_fwd[i], cyc_fwd[i + 1]);
                part[i] = cyc_sum;
            }
            if (cyc_sum == 0.0) {
                std::ostringstream os;
                os << "flat_path: degenerate steering cycle at k=" << k
                   << " (cycle sum is zero while the axis edge blocks)";
                throw ConstructionError(os.str());
            }
            const double xi = -((s > 0.0 ? 1.0 : -1.0) * (cyc_sum > 0.0 ? 1.0 : -1.0));
            const double delta = xi * cyc_sum;
            const long long cap =
                static_cast<long long>(std::ceil(4.0 * cbar / std::fabs(cyc_sum))) + 1;
            // number of repetitions until the sign flips (or hits zero)
            long long reps = 0;
            {
                double probe = s;
                while (s * probe > 0.0) {
                    probe += delta;
                    if (++reps > cap)
                        throw std::logic_error("flat_path: steering repetition cap exceeded");
                }
            }
            res.cycles += reps;
            if (opts.materialize) {
                for (long long r = 0; r < reps; ++r) {
                    if (xi > 0.0) {
                        for (int i = 0; i < 4; ++i) emit(cyc_fwd[i], cyc_fwd[i + 1]);
                    } else {
                        for (int i = 4; i > 0; --i) emit(cyc_fwd[i], cyc_fwd[i - 1]);
                    }
                }
            } else {
                // prefix extremes without materializing: anchors are linear in
                // the repetition index, cycle-internal offsets are fixed
                double pmin = 0.0, pmax = 0.0;
                if (xi > 0.0) {
                    for (double p : part) {
                        pmin = std::min(pmin, p);
                        pmax = std::max(pmax, p);
                    }
                } else {
                    double run = 0.0;
                    for (int i = 4; i > 0; --i) {
                        run += step_value(env, cyc_fwd[i], cyc_fwd[i - 1]);
                        pmin = std::min(pmin, run);
                        pmax = std::max(pmax, run);
                    }
                }
                double base = s;
                for (long long r = 0; r < reps; ++r) {
                    res.max_abs_prefix =
                        std::max({res.max_abs_prefix, std::fabs(base + pmin),
                                  std::fabs(base + pmax)});
                    base += delta;
                }
                res.edges += 4 * reps;
                s = base;
                res.max_abs_prefix = std::max(res.max_abs_prefix, std::fabs(s));
            }
        }
        emit(here, next);
        res.max_abs_anchor = std::max(res.max_abs_anchor, std::fabs(s));
        if (res.max_abs_anchor > anchor_tol)
            throw std::logic_error("flat_path: anchor bound exceeded");
    }
    if (opts.materialize) res.path = PathSeq::from_vertices(std::move(verts));
    return res;
}

OverlayMap plant_outward_ball(Vertex center, long long radius) {
    if (radius < 1) throw std::invalid_argument("plant_outward_ball: radius >= 1");
    OverlayMap out;
    const auto sign_of = [](long long a) { return a >= 0 ? 1 : -1; };
    for (long long a = -radius; a <= radius; ++a) {
        for (long long b = -radius; b <= radius; ++b) {
            if (std::llabs(a) + std::llabs(b) > radius) continue;
            // horizontal edge (a,b)-(a+1,b)
            if (std::llabs(a + 1) + std::llabs(b) <= radius)
                out[{center.x + a, center.y + b, Orient::H}] = {1.0, sign_of(a)};
            // vertical edge (a,b)-(a,b+1)
            if (std::llabs(a) + std::llabs(b + 1) <= radius)
                out[{center.x + a, center.y + b, Orient::V}] = {1.0, sign_of(b)};
        }
    }
    return out;
}

OutwardBallReport verify_outward_ball(const EnvHandle& env, Vertex center, long long radius,
                                      int n_paths, std::uint64_t seed) {
    OutwardBallReport rep;
    RandomStream rs(seed, 0xBA11ULL, static_cast<std::uint64_t>(radius));
    for (int p = 0; p < n_paths; ++p) {
        Vertex pos = center;
        double sum = 0.0;
        long long len = 0;
        while (l1_distance(pos, center) < radius) {
            // uniform neighbor that stays inside the closed ball
            Vertex cand[4];
            int cnt = 0;
            for (const Vertex d : kDirs) {
                const Vertex nxt = pos + d;
                if (l1_distance(nxt, center) <= radius) cand[cnt++] = nxt;
            }
            const Vertex nxt =
                cand[static_cast<int>(rs.next_u01() * static_cast<double>(cnt))];
            sum += step_value(env, pos, nxt);
            pos = nxt;
            ++len;
            if (pos == center) {
                ++rep.center_returns_checked;
                if (sum != 0.0) rep.all_exact = false;
            }
        }
        ++rep.paths_tested;
        rep.max_path_len = std::max(rep.max_path_len, len);
        if (sum != static_cast<double>(radius)) rep.all_exact = false;
    }
    return rep;
}

std::optional<Vertex> find_heavy_vertex(const EnvHandle& env, Vertex lo, Vertex hi,
                                        double threshold) {
    for (long long y = lo.y; y <= hi.y; ++y) {
        for (long long x = lo.x; x <= hi.x; ++x) {
            const EdgeKey inc[4] = {{x - 1, y, Orient::H},
                                    {x, y, Orient::H},
                                    {x, y - 1, Orient::V},
                                    {x, y, Orient::V}};
            bool heavy = true;
            for (const EdgeKey& e : inc) {
                if (std::fabs(env.sample(e).x) <= threshold) {
                    heavy = false;
                    break;
                }
            }
            if (heavy) return Vertex{x, y};
        }
    }
    return std::nullopt;
}

}  // namespace sawsum
