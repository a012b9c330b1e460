#include "sawsum/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sawsum/parallel.hpp"
#include "sawsum/stats.hpp"

namespace sawsum {

void BlockParams::validate() const {
    tess().validate();
    if (!(K1 > 0.0 && K2 > 0.0))
        throw std::invalid_argument("BlockParams: K1, K2 must be positive");
    if (!(p_o >= 0.5 && p_o <= p_v && p_v <= 1.0))
        throw std::invalid_argument("BlockParams: normalized 1/2 <= p_o <= p_v <= 1 required");
}

void to_json(nlohmann::json& j, const BlockParams& p) {
    j = nlohmann::json{{"m", p.m},   {"n", p.n},   {"a1", p.a1},  {"a2", p.a2},
                       {"K1", p.K1}, {"K2", p.K2}, {"K3", p.K3()}, {"p_o", p.p_o},
                       {"p_v", p.p_v}};
}

void from_json(const nlohmann::json& j, BlockParams& p) {
    p.m = j.at("m").get<int>();
    p.n = j.at("n").get<long long>();
    p.a1 = j.at("a1").get<long long>();
    p.a2 = j.at("a2").get<long long>();
    p.K1 = j.at("K1").get<double>();
    p.K2 = j.at("K2").get<double>();
    p.p_o = j.at("p_o").get<double>();
    p.p_v = j.at("p_v").get<double>();
    p.validate();
}

BlockLaws make_block_laws(const BlockParams& params) {
    params.validate();
    const Pmf exact_r = exact_crossing_law(params.a1, params.a2, params.p_o, params.p_v);
    const Pmf exact_l = exact_r.mirrored();
    const double var =
        4.0 * (static_cast<double>(params.a1) * params.p_o * (1.0 - params.p_o) +
               static_cast<double>(params.a2) * params.p_v * (1.0 - params.p_v));
    Pmf sym = var > 0.0 ? symmetrized_law(std::sqrt(var), params.crossing_len()) : exact_r;
    BlockLaws laws{exact_r, exact_l, sym, MaxCoupling(exact_r, sym), MaxCoupling(exact_l, sym),
                   var <= 0.0};
    return laws;
}

CrossingRecord symmetrize_path(const EnvHandle& env, const PathSeq& path, const Pmf& exact,
                               const Pmf& sym, RandomStream& rs) {
    CrossingRecord rec;
    std::vector<double> xs;
    xs.reserve(path.length());
    long long t = 0;
    double s = 0.0;
    path.for_each_step([&](EdgeStep st) {
        const EdgeValue ev = env.sample(st.key);
        const int z = st.dir * ev.y;
        t += z;
        s += z * ev.x;
        rec.max_abs_x = std::max(rec.max_abs_x, std::fabs(ev.x));
        xs.push_back(ev.x);
    });
    rec.crossings = t;
    rec.sum = s;

    const long long ell = static_cast<long long>(path.length());
    if (((ell + t) & 1LL) != 0)
        throw std::logic_error("symmetrize_path: crossing total parity mismatch");
    const MaxCoupling coup(exact, sym);
    rec.crossings_sym = coup.draw_given(t, rs);
    rec.coupled = rec.crossings_sym == rec.crossings;

    // Sign-reordered representation: the first Q weights positive, the rest
    // negative, Q counting the +1 crossings. Off the coupling event the
    // companion draw may fall outside [-ell, ell]; the count is clamped.
    const long long q =
        std::clamp((ell + rec.crossings_sym) / 2, 0LL, ell);
    double pos = 0.0, tot = 0.0;
    for (long long i = 0; i < ell; ++i) {
        tot += xs[static_cast<std::size_t>(i)];
        if (i < q) pos += xs[static_cast<std::size_t>(i)];
    }
    rec.sum_sym = 2.0 * pos - tot;
    return rec;
}

namespace {

constexpr std::uint64_t kCouplingTagBase = 0xB10CC09FULL;

struct ColumnSums {
    double abs_total = 0.0;
    std::vector<double> signed_prefix;  // prefix[c] = signed sum of the first c edges
};

ColumnSums column_sums(const EnvHandle& env, const std::vector<EdgeKey>& edges) {
    ColumnSums out;
    out.signed_prefix.reserve(edges.size() + 1);
    out.signed_prefix.push_back(0.0);
    double run = 0.0;
    for (const EdgeKey& e : edges) {
        const EdgeValue ev = env.sample(e);
        // boundary columns are always crossed upward
        run += ev.y * ev.x;
        out.abs_total += std::fabs(ev.x);
        out.signed_prefix.push_back(run);
    }
    return out;
}

}  // namespace

BlockReport classify_block(const EnvHandle& env, const BlockGeometry& geom,
                           const BlockParams& params, const BlockLaws& laws) {
    const int m = params.m;
    const long long ell = params.crossing_len();
    const bool right = geom.address().side == Side::Right;
    const MaxCoupling& coup = right ? laws.coup_right : laws.coup_left;

    BlockReport rep;
    rep.crossings.resize(static_cast<std::size_t>(m));

    thread_local std::vector<double> xbuf;
    xbuf.resize(static_cast<std::size_t>(ell));

    for (int i = 1; i <= m; ++i) {
        CrossingRecord& rec = rep.crossings[static_cast<std::size_t>(i - 1)];
        long long t = 0;
        double s = 0.0;
        double mx = 0.0;
        std::size_t idx = 0;
        geom.walk_crossing(i, [&](EdgeKey key, int dir) {
            const EdgeValue ev = env.sample(key);
            const int z = dir * ev.y;
            t += z;
            s += z * ev.x;
            const double ax = std::fabs(ev.x);
            if (ax > mx) mx = ax;
            xbuf[idx++] = ev.x;
        });
        rec.crossings = t;
        rec.sum = s;
        rec.max_abs_x = mx;

        RandomStream rs = env.aux_stream(
            static_cast<std::uint64_t>(geom.address().b.bx),
            static_cast<std::uint64_t>(geom.address().b.by),
            kCouplingTagBase ^ (static_cast<std::uint64_t>(i) << 2) ^
                (right ? 0ULL : 2ULL));
        rec.crossings_sym = coup.draw_given(t, rs);
        rec.coupled = rec.crossings_sym == rec.crossings;

        const long long q = std::clamp((ell + rec.crossings_sym) / 2, 0LL, ell);
        double pos = 0.0, tot = 0.0;
        for (long long k = 0; k < ell; ++k) {
            tot += xbuf[static_cast<std::size_t>(k)];
            if (k < q) pos += xbuf[static_cast<std::size_t>(k)];
        }
        rec.sum_sym = 2.0 * pos - tot;
    }

    rep.coupling_ok = std::all_of(rep.crossings.begin(), rep.crossings.end(),
                                  [](const CrossingRecord& r) { return r.coupled; });

    int imin = 1, imax = 1;
    for (int i = 2; i <= m; ++i) {
        const double s = rep.crossings[static_cast<std::size_t>(i - 1)].sum;
        if (s < rep.crossings[static_cast<std::size_t>(imin - 1)].sum) imin = i;
        if (s > rep.crossings[static_cast<std::size_t>(imax - 1)].sum) imax = i;
    }
    rep.i_min = imin;
    rep.i_max = imax;

    const ColumnSums entry = column_sums(env, geom.entry_column_edges());
    const ColumnSums exitc = column_sums(env, geom.exit_column_edges());
    rep.entry_col_abs_sum = entry.abs_total;
    rep.exit_col_abs_sum = exitc.abs_total;

    rep.boundary_light =
        entry.abs_total <= params.K1 / 2.0 && exitc.abs_total <= params.K1 / 2.0;
    rep.escapes_both =
        rep.crossings[static_cast<std::size_t>(imax - 1)].sum >= 2.0 * params.K1 &&
        rep.crossings[static_cast<std::size_t>(imin - 1)].sum <= -2.0 * params.K1;
    rep.interior_bounded = std::all_of(
        rep.crossings.begin(), rep.crossings.end(),
        [&](const CrossingRecord& r) { return r.max_abs_x <= params.K2; });
    rep.good = rep.coupling_ok && rep.boundary_light && rep.escapes_both && rep.interior_bounded;

    const auto transit_sum = [&](int i) {
        const auto c = static_cast<std::size_t>(geom.crossing_offset(i));
        return entry.signed_prefix[c] + rep.crossings[static_cast<std::size_t>(i - 1)].sum +
               (exitc.signed_prefix.back() - exitc.signed_prefix[c]);
    };
    rep.transit_sum_min = transit_sum(imin);
    rep.transit_sum_max = transit_sum(imax);

    if (rep.good) {
        const double k3 = params.K3();
        rep.bounds_ok = rep.transit_sum_max >= params.K1 && rep.transit_sum_max <= k3 &&
                        rep.transit_sum_min <= -params.K1 && rep.transit_sum_min >= -k3;
    }
    return rep;
}

SyntheticBlock simulate_synthetic_block(const BlockParams& params, const LawSpec& law,
                                        const BlockLaws& laws, RandomStream& rs) {
    const int m = params.m;
    const long long M = params.tess().col_height();

    SyntheticBlock out;
    // interior crossing paths (side r): a1 signs at p_o, a2 signs at 1 - p_v
    std::vector<double> sums(static_cast<std::size_t>(m), 0.0);
    bool interior_ok = true;
    bool coupled_all = true;
    for (int i = 0; i < m; ++i) {
        long long t = 0;
        double s = 0.0;
        double mx = 0.0;
        for (long long k = 0; k < params.a1; ++k) {
            const double x = law.sample(rs);
            const int z = rs.next_bernoulli(params.p_o) ? 1 : -1;
            t += z;
            s += z * x;
            mx = std::max(mx, std::fabs(x));
        }
        for (long long k = 0; k < params.a2; ++k) {
            const double x = law.sample(rs);
            const int z = rs.next_bernoulli(1.0 - params.p_v) ? 1 : -1;
            t += z;
            s += z * x;
            mx = std::max(mx, std::fabs(x));
        }
        sums[static_cast<std::size_t>(i)] = s;
        if (mx > params.K2) interior_ok = false;
        const long long tsym = laws.coup_right.draw_given(t, rs);
        if (tsym != t) coupled_all = false;
    }
    out.coupling_ok = coupled_all;
    out.interior_bounded = interior_ok;

    int imin = 0, imax = 0;
    for (int i = 1; i < m; ++i) {
        if (sums[static_cast<std::size_t>(i)] < sums[static_cast<std::size_t>(imin)]) imin = i;
        if (sums[static_cast<std::size_t>(i)] > sums[static_cast<std::size_t>(imax)]) imax = i;
    }
    out.escapes_both = sums[static_cast<std::size_t>(imax)] >= 2.0 * params.K1 &&
                       sums[static_cast<std::size_t>(imin)] <= -2.0 * params.K1;

    // boundary columns: M vertical edges each, crossed upward
    double abs_entry = 0.0, abs_exit = 0.0;
    std::vector<double> pre_entry(static_cast<std::size_t>(M) + 1, 0.0);
    std::vector<double> pre_exit(static_cast<std::size_t>(M) + 1, 0.0);
    for (long long k = 0; k < M; ++k) {
        const double xe = law.sample(rs);
        const int ze = rs.next_bernoulli(params.p_v) ? 1 : -1;
        abs_entry += std::fabs(xe);
        pre_entry[static_cast<std::size_t>(k + 1)] =
            pre_entry[static_cast<std::size_t>(k)] + ze * xe;
        const double xx = law.sample(rs);
        const int zx = rs.next_bernoulli(params.p_v) ? 1 : -1;
        abs_exit += std::fabs(xx);
        pre_exit[static_cast<std::size_t>(k + 1)] =
            pre_exit[static_cast<std::size_t>(k)] + zx * xx;
    }
    out.boundary_light = abs_entry <= params.K1 / 2.0 && abs_exit <= params.K1 / 2.0;
    out.good = out.coupling_ok && out.boundary_light && out.escapes_both && out.interior_bounded;

    const auto transit = [&](int i) {
        const std::size_t c = static_cast<std::size_t>(2 + 3 * i);
        return pre_entry[c] + sums[static_cast<std::size_t>(i)] +
               (pre_exit[static_cast<std::size_t>(M)] - pre_exit[c]);
    };
    out.transit_sum_min = transit(imin);
    out.transit_sum_max = transit(imax);
    return out;
}

int calibrated_m(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("calibrated_m: epsilon in (0,1)");
    return static_cast<int>(std::floor(std::log2(1.0 / epsilon))) + 4;
}

namespace {

bool is_constant_law(const LawSpec& law) {
    if (law.has_continuous_part()) return false;
    const auto atoms = law.flat_atoms();
    double v = 0.0;
    bool first = true;
    for (const auto& at : atoms) {
        if (at.prob <= 0.0) continue;
        if (first) {
            v = at.value;
            first = false;
        } else if (at.value != v) {
            return false;
        }
    }
    return true;
}

}  // namespace

EscapeEstimate estimate_escape_probs(const BlockParams& params, const LawSpec& law,
                                     int samples, std::uint64_t seed, int workers) {
    EscapeEstimate out;
    out.samples = samples;
    const int chunks = 64;
    std::vector<long long> plus(chunks, 0), minus(chunks, 0);
    parallel_for(
        chunks,
        [&](long long c) {
            RandomStream rs(seed, 0x45534341ULL, static_cast<std::uint64_t>(c));
            const int lo = static_cast<int>(c) * samples / chunks;
            const int hi = static_cast<int>(c + 1) * samples / chunks;
            long long np = 0, nm = 0;
            for (int s = lo; s < hi; ++s) {
                double sum = 0.0;
                for (long long k = 0; k < params.a1; ++k) {
                    const double x = law.sample(rs);
                    sum += (rs.next_bernoulli(params.p_o) ? 1 : -1) * x;
                }
                for (long long k = 0; k < params.a2; ++k) {
                    const double x = law.sample(rs);
                    sum += (rs.next_bernoulli(1.0 - params.p_v) ? 1 : -1) * x;
                }
                if (sum >= 2.0 * params.K1) ++np;
                if (sum <= -2.0 * params.K1) ++nm;
            }
            plus[static_cast<std::size_t>(c)] = np;
            minus[static_cast<std::size_t>(c)] = nm;
        },
        workers);
    long long np = 0, nm = 0;
    for (int c = 0; c < chunks; ++c) {
        np += plus[static_cast<std::size_t>(c)];
        nm += minus[static_cast<std::size_t>(c)];
    }
    out.p_plus = static_cast<double>(np) / samples;
    out.p_minus = static_cast<double>(nm) / samples;
    return out;
}

CalibrationOutcome calibrate(double epsilon, const LawSpec& law, CalibrateOptions opts) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("calibrate: epsilon in (0,1) required");
    law.validate();
    if (law.is_delta_zero())
        throw std::invalid_argument("calibrate: law is a point mass at zero");

    const auto [norm_law, transform] = normalize_axes(law);
    if (norm_law.p_o >= 1.0 && is_constant_law(norm_law))
        throw std::invalid_argument(
            "calibrate: unsupported regime (p_o = p_v = 1 with a.s. constant weights)");

    CalibrationOutcome out;
    const int m = calibrated_m(epsilon);
    const long long M = 3LL * m + 1;
    const double target = 1.0 - epsilon / 4.0;

    // K1: boundary-sum quantile. Both boundary columns must stay under K1/2,
    // so each needs sqrt(target).
    double K1 = 0.0;
    {
        RandomStream rs(opts.seed, 0xF1B0ULL, 0);
        std::vector<double> sums(static_cast<std::size_t>(opts.mc_samples));
        for (auto& s : sums) {
            double acc = 0.0;
            for (long long k = 0; k < M; ++k) acc += std::fabs(norm_law.sample(rs));
            s = acc;
        }
        std::sort(sums.begin(), sums.end());
        const double q = std::sqrt(target);
        const std::size_t idx = std::min(
            sums.size() - 1,
            static_cast<std::size_t>(std::ceil(q * static_cast<double>(sums.size()))));
        const double quant = sums[idx];
        K1 = std::ceil(2.0 * quant / opts.k1_grid_step) * opts.k1_grid_step;
        if (K1 <= 0.0) K1 = opts.k1_grid_step;
        double below = 0.0;
        for (double s : sums)
            if (s <= K1 / 2.0) below += 1.0;
        const double frac = below / static_cast<double>(sums.size());
        out.p_F1 = frac * frac;
    }

    const double rho_val = rho(norm_law.p_o, norm_law.p_v);
    const bool rational =
        rho_val == 0.0 ||
        rational_approx(rho_val, 10000, 1e-12 * std::max(1.0, rho_val)).has_value();

    // Acceptance predicate for a candidate size: exact coupling mass plus a
    // conservative escape bound from single-path Monte Carlo.
    struct Probe {
        bool pass = false;
        double tv = 1.0, p_F0 = 0.0, p_plus = 0.0, p_minus = 0.0;
    };
    const auto probe_n = [&](long long n_idx) {
        Probe pr;
        const AspectPair ap = dirichlet_pair(rho_val, static_cast<int>(n_idx));
        BlockParams cand{m, n_idx, ap.a1, ap.a2, K1, 1.0, norm_law.p_o, norm_law.p_v};
        const double var =
            4.0 * (static_cast<double>(ap.a1) * cand.p_o * (1.0 - cand.p_o) +
                   static_cast<double>(ap.a2) * cand.p_v * (1.0 - cand.p_v));
        if (var > 0.0) {
            const Pmf exact = exact_crossing_law(ap.a1, ap.a2, cand.p_o, cand.p_v);
            pr.tv = tv_distance(exact, symmetrized_law(std::sqrt(var), ap.a1 + ap.a2));
        } else {
            pr.tv = 0.0;
        }
        pr.p_F0 = std::pow(1.0 - pr.tv, m);
        if (pr.p_F0 < target) return pr;

        const EscapeEstimate esc =
            estimate_escape_probs(cand, norm_law, opts.mc_samples,
                                  opts.seed ^ static_cast<std::uint64_t>(n_idx), opts.workers);
        pr.p_plus = esc.p_plus;
        pr.p_minus = esc.p_minus;
        const double se_p =
            std::sqrt(std::max(esc.p_plus * (1.0 - esc.p_plus), 1e-12) / opts.mc_samples);
        const double se_m =
            std::sqrt(std::max(esc.p_minus * (1.0 - esc.p_minus), 1e-12) / opts.mc_samples);
        const double lo_p = std::max(0.0, esc.p_plus - 1.65 * se_p);
        const double lo_m = std::max(0.0, esc.p_minus - 1.65 * se_m);
        const double p_F2_low =
            1.0 - std::pow(1.0 - lo_p, m) - std::pow(1.0 - lo_m, m);
        pr.pass = p_F2_low >= target;
        return pr;
    };

    long long chosen = -1;
    Probe chosen_probe;
    long long prev_fail = 0;
    for (long long n_idx = 1; n_idx <= opts.n_max; rational ? n_idx *= 2 : ++n_idx) {
        ++out.ladder_steps;
        const Probe pr = probe_n(n_idx);
        if (pr.pass) {
            chosen = n_idx;
            chosen_probe = pr;
            break;
        }
        prev_fail = n_idx;
        const AspectPair ap = dirichlet_pair(rho_val, static_cast<int>(n_idx));
        if (ap.a1 > opts.n_max) break;
    }
    if (chosen < 0) {
        std::ostringstream os;
        os << "calibrate: budget exhausted (n_max=" << opts.n_max << ", eps=" << epsilon
           << ", law=" << law.describe() << ", K1=" << K1 << ")";
        throw CalibrationError(os.str());
    }

    // Sub-doubling refinement between the last failing and first passing size.
    if (rational && prev_fail > 0 && opts.refine_steps > 0) {
        for (int k = 1; k <= opts.refine_steps; ++k) {
            const long long cand =
                prev_fail +
                (chosen - prev_fail) * k / (opts.refine_steps + 1);
            if (cand <= prev_fail || cand >= chosen) continue;
            ++out.ladder_steps;
            const Probe pr = probe_n(cand);
            if (pr.pass) {
                chosen = cand;
                chosen_probe = pr;
                break;
            }
        }
    }

    const AspectPair ap = dirichlet_pair(rho_val, static_cast<int>(chosen));
    BlockParams params{m, chosen, ap.a1, ap.a2, K1, 1.0, norm_law.p_o, norm_law.p_v};

    // K2: per-edge weight quantile so that all m * ell interior weights stay
    // capped with probability >= target.
    const double per_edge = std::pow(target, 1.0 / static_cast<double>(m * params.crossing_len()));
    params.K2 = norm_law.abs_quantile(per_edge);
    if (params.K2 <= 0.0) params.K2 = opts.k1_grid_step;
    out.p_F3 = std::pow(norm_law.abs_cdf(params.K2),
                        static_cast<double>(m) * static_cast<double>(params.crossing_len()));

    out.params = params;
    out.tv = chosen_probe.tv;
    out.p_F0 = chosen_probe.p_F0;
    out.p_plus = chosen_probe.p_plus;
    out.p_minus = chosen_probe.p_minus;
    out.p_F2 = 1.0 - std::pow(1.0 - chosen_probe.p_plus, m) -
               std::pow(1.0 - chosen_probe.p_minus, m);

    // Fresh-block verification of the combined event.
    {
        const BlockLaws laws = make_block_laws(params);
        const int blocks = opts.verify_blocks;
        const int chunks = 64;
        std::vector<long long> good(chunks, 0);
        parallel_for(
            chunks,
            [&](long long c) {
                RandomStream rs(opts.seed, 0x7E51F1ULL, static_cast<std::uint64_t>(c));
                const int lo = static_cast<int>(c) * blocks / chunks;
                const int hi = static_cast<int>(c + 1) * blocks / chunks;
                long long g = 0;
                for (int b = lo; b < hi; ++b)
                    if (simulate_synthetic_block(params, norm_law, laws, rs).good) ++g;
                good[static_cast<std::size_t>(c)] = g;
            },
            opts.workers);
        long long g = 0;
        for (long long v : good) g += v;
        out.p_good = static_cast<double>(g) / blocks;
        const double sigma = std::sqrt(epsilon * (1.0 - epsilon) / blocks);
        out.verified = out.p_good >= 1.0 - epsilon - 3.0 * sigma;
        if (!out.verified) {
            std::ostringstream os;
            os << "calibrate: verification failed (p_good=" << out.p_good
               << ", target=" << 1.0 - epsilon << " - 3*" << sigma << ")";
            throw CalibrationError(os.str());
        }
    }
    out.params = params;
    return out;
}

}  // namespace sawsum
