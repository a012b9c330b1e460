#include "sawsum/probability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sawsum/stats.hpp"

namespace sawsum {

Pmf::Pmf(int offset, long long kmin, std::vector<double> masses)
    : offset_(offset & 1), kmin_(kmin), mass_(std::move(masses)) {
    if (((kmin_ % 2) + 2) % 2 != offset_)
        throw std::invalid_argument("Pmf: kmin parity does not match offset");
    if (mass_.empty()) throw std::invalid_argument("Pmf: empty support");
}

Pmf Pmf::point(long long k) {
    return Pmf(static_cast<int>(((k % 2) + 2) % 2), k, {1.0});
}

double Pmf::at(long long k) const {
    if (k < kmin_ || ((k - kmin_) & 1LL)) return 0.0;
    const long long i = (k - kmin_) / 2;
    if (i >= static_cast<long long>(mass_.size())) return 0.0;
    return mass_[static_cast<std::size_t>(i)];
}

double Pmf::total() const {
    Kahan s;
    for (double m : mass_) s.add(m);
    return s.value();
}

double Pmf::mean() const {
    Kahan s;
    for_each([&](long long k, double m) { s.add(static_cast<double>(k) * m); });
    return s.value();
}

double Pmf::variance() const {
    const double mu = mean();
    Kahan s;
    for_each([&](long long k, double m) {
        const double d = static_cast<double>(k) - mu;
        s.add(d * d * m);
    });
    return s.value();
}

void Pmf::normalize() {
    const double t = total();
    if (t <= 0.0) throw std::runtime_error("Pmf: cannot normalize zero mass");
    for (double& m : mass_) m /= t;
}

void Pmf::trim(double tail_eps) {
    std::size_t lo = 0, hi = mass_.size();
    while (lo + 1 < hi && mass_[lo] < tail_eps) ++lo;
    while (hi > lo + 1 && mass_[hi - 1] < tail_eps) --hi;
    if (lo > 0 || hi < mass_.size()) {
        mass_ = std::vector<double>(mass_.begin() + static_cast<std::ptrdiff_t>(lo),
                                    mass_.begin() + static_cast<std::ptrdiff_t>(hi));
        kmin_ += 2 * static_cast<long long>(lo);
    }
    normalize();
}

Pmf Pmf::mirrored() const {
    std::vector<double> rev(mass_.rbegin(), mass_.rend());
    return Pmf(offset_, -kmax(), std::move(rev));
}

namespace {

// pmf of the sum of `count` independent +-1 signs with P(+1) = p, as masses
// over k = -count, -count+2, ..., count. Binomial recurrence from the mode
// keeps tiny tails stable; entries below 1e-18 of the peak are dropped.
struct SignWalk {
    long long kmin = 0;
    std::vector<double> mass;
};

SignWalk sign_walk_pmf(long long count, double p) {
    SignWalk out;
    if (count == 0) {
        out.kmin = 0;
        out.mass = {1.0};
        return out;
    }
    if (p <= 0.0 || p >= 1.0) {
        out.kmin = p >= 1.0 ? count : -count;
        out.mass = {1.0};
        return out;
    }
    const double q = 1.0 - p;
    // j = number of +1 signs ~ Bin(count, p); k = 2j - count
    const long long mode = std::clamp(
        static_cast<long long>(std::floor((static_cast<double>(count) + 1.0) * p)), 0LL, count);
    std::vector<double> b(static_cast<std::size_t>(count) + 1, 0.0);
    b[static_cast<std::size_t>(mode)] = 1.0;
    for (long long j = mode; j < count; ++j) {
        const double ratio = (static_cast<double>(count - j) / static_cast<double>(j + 1)) * (p / q);
        b[static_cast<std::size_t>(j + 1)] = b[static_cast<std::size_t>(j)] * ratio;
        if (b[static_cast<std::size_t>(j + 1)] < 1e-320) break;
    }
    for (long long j = mode; j > 0; --j) {
        const double ratio = (static_cast<double>(j) / static_cast<double>(count - j + 1)) * (q / p);
        b[static_cast<std::size_t>(j - 1)] = b[static_cast<std::size_t>(j)] * ratio;
        if (b[static_cast<std::size_t>(j - 1)] < 1e-320) break;
    }
    Kahan tot;
    for (double v : b) tot.add(v);
    const double inv = 1.0 / tot.value();
    const double cut = 1e-18;
    long long lo = 0, hi = count;
    while (lo < hi && b[static_cast<std::size_t>(lo)] * inv < cut) ++lo;
    while (hi > lo && b[static_cast<std::size_t>(hi)] * inv < cut) --hi;
    out.kmin = 2 * lo - count;
    out.mass.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long long j = lo; j <= hi; ++j)
        out.mass.push_back(b[static_cast<std::size_t>(j)] * inv);
    return out;
}

}  // namespace

Pmf exact_crossing_law(long long a1, long long a2, double p_o, double p_v) {
    if (a1 < 0 || a2 < 0 || a1 + a2 < 1)
        throw std::invalid_argument("exact_crossing_law: need a1 + a2 >= 1");
    if (!(p_o >= 0.0 && p_o <= 1.0 && p_v >= 0.0 && p_v <= 1.0))
        throw std::invalid_argument("exact_crossing_law: probabilities outside [0,1]");
    // minus a sign-walk at p_v == plus a sign-walk at 1 - p_v
    const SignWalk wa = sign_walk_pmf(a1, p_o);
    const SignWalk wb = sign_walk_pmf(a2, 1.0 - p_v);
    std::vector<double> conv(wa.mass.size() + wb.mass.size() - 1, 0.0);
    std::vector<double> comp(conv.size(), 0.0);
    for (std::size_t i = 0; i < wa.mass.size(); ++i) {
        const double ai = wa.mass[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < wb.mass.size(); ++j) {
            // Kahan-compensated accumulation per output cell.
            const std::size_t k = i + j;
            const double y = ai * wb.mass[j] - comp[k];
            const double t = conv[k] + y;
            comp[k] = (t - conv[k]) - y;
            conv[k] = t;
        }
    }
    const long long ell = a1 + a2;
    Pmf out(static_cast<int>(ell & 1LL), wa.kmin + wb.kmin, std::move(conv));
    out.normalize();
    return out;
}

Pmf symmetrized_law(double b_N, long long N) {
    if (!(b_N > 0.0)) throw std::domain_error("symmetrized_law: b_N must be positive");
    const int offset = static_cast<int>(((N % 2) + 2) % 2);
    // Tail cut where 1 - Phi((k-1)/b) < ~1e-13 per side.
    const long long kcut_raw = static_cast<long long>(std::ceil(7.6 * b_N)) + 2;
    const long long kcut = kcut_raw + ((kcut_raw & 1LL) == offset ? 0 : 1);
    std::vector<double> half;  // masses at k = offset, offset+2, ...
    for (long long k = offset; k <= kcut; k += 2)
        half.push_back(norm_cdf((static_cast<double>(k) + 1.0) / b_N) -
                       norm_cdf((static_cast<double>(k) - 1.0) / b_N));
    std::vector<double> mass;
    const long long kmin = offset == 0 ? -kcut : -kcut;
    for (long long k = kmin; k <= kcut; k += 2) {
        const long long idx = (std::llabs(k) - offset) / 2;
        mass.push_back(half[static_cast<std::size_t>(idx)]);
    }
    Pmf out(offset, kmin, std::move(mass));
    out.normalize();
    return out;
}

Pmf gaussian_window_law(double a_N, double b_N, long long N, long long kmin, long long kmax) {
    if (!(b_N > 0.0)) throw std::domain_error("gaussian_window_law: b_N must be positive");
    const int offset = static_cast<int>(((N % 2) + 2) % 2);
    if (((kmin % 2) + 2) % 2 != offset) kmin -= 1;
    std::vector<double> mass;
    for (long long k = kmin; k <= kmax; k += 2)
        mass.push_back(norm_cdf((static_cast<double>(k) + 1.0 - a_N) / b_N) -
                       norm_cdf((static_cast<double>(k) - 1.0 - a_N) / b_N));
    return Pmf(offset, kmin, std::move(mass));
}

double tv_distance(const Pmf& p, const Pmf& q) {
    if (p.offset() != q.offset()) return 1.0;
    const long long lo = std::min(p.kmin(), q.kmin());
    const long long hi = std::max(p.kmax(), q.kmax());
    Kahan s;
    for (long long k = lo; k <= hi; k += 2) s.add(std::fabs(p.at(k) - q.at(k)));
    return 0.5 * s.value();
}

MaxCoupling::MaxCoupling(Pmf p, Pmf q) : p_(std::move(p)), q_(std::move(q)) {
    tv_ = tv_distance(p_, q_);
    if (tv_ <= 0.0) return;
    Kahan acc;
    const long long lo = std::min(p_.kmin(), q_.kmin());
    const long long hi = std::max(p_.kmax(), q_.kmax());
    for (long long k = lo; k <= hi; k += 2) {
        const double excess = q_.at(k) - p_.at(k);
        if (excess > 0.0) {
            acc.add(excess);
            res_k_.push_back(k);
            res_cdf_.push_back(acc.value());
        }
    }
    // normalize the residual cdf to end at exactly 1
    const double z = acc.value();
    for (double& c : res_cdf_) c /= z;
    if (!res_cdf_.empty()) res_cdf_.back() = 1.0;
}

long long MaxCoupling::draw_given(long long t, RandomStream& rs) const {
    const double pt = p_.at(t);
    if (pt <= 0.0) throw std::domain_error("MaxCoupling: conditioning on a null atom");
    const double keep = std::min(pt, q_.at(t)) / pt;
    if (rs.next_u01() < keep || res_k_.empty()) return t;
    // residual draw from (q - p)_+ normalized
    const double u = rs.next_u01();
    const auto it = std::lower_bound(res_cdf_.begin(), res_cdf_.end(), u);
    const std::size_t idx = static_cast<std::size_t>(it - res_cdf_.begin());
    return res_k_[std::min(idx, res_k_.size() - 1)];
}

long long maximal_coupling_conditional(const Pmf& p, const Pmf& q, long long t,
                                       RandomStream& rs) {
    return MaxCoupling(p, q).draw_given(t, rs);
}

CltBoundTerms clt_bound_eval(const CltBoundInputs& in, double berry_esseen_const) {
    if (!(in.pi_K > 0.5))
        throw std::domain_error("clt_bound_eval: pi_K must exceed 1/2");
    if (!(in.sigma2_K > 0.0))
        throw std::domain_error("clt_bound_eval: sigma2_K must be positive");
    if (in.N < 1) throw std::domain_error("clt_bound_eval: N >= 1");
    if (in.phi_N < 0.0) throw std::domain_error("clt_bound_eval: phi_N >= 0");

    CltBoundTerms out;
    const double sigma = std::sqrt(in.sigma2_K);
    const double scale = sigma * std::sqrt(static_cast<double>(in.N) / 3.0);
    out.gaussian_term = 2.0 * (norm_cdf(in.phi_N / scale) - 0.5);
    out.berry_esseen =
        2.0 * berry_esseen_const * in.K * in.K * in.K /
        (sigma * sigma * sigma * std::sqrt(static_cast<double>(in.N) / 3.0));
    if (in.lambda) {
        out.lambda = *in.lambda;
    } else {
        // Large-deviation rate for P(Bin(N, 1 - pi_K) > 2N/3):
        // KL(2/3 || 1 - pi_K), infinite when pi_K = 1.
        const double miss = 1.0 - in.pi_K;
        if (miss == 0.0) {
            out.lambda = std::numeric_limits<double>::infinity();
        } else {
            out.lambda = (2.0 / 3.0) * std::log((2.0 / 3.0) / miss) +
                         (1.0 / 3.0) * std::log((1.0 / 3.0) / in.pi_K);
        }
    }
    out.chernoff = std::exp(-out.lambda * static_cast<double>(in.N));
    out.total = out.gaussian_term + out.berry_esseen + out.chernoff;
    return out;
}

double local_clt_delta(long long a1, long long a2, double p_o, double p_v) {
    const double var =
        4.0 * (static_cast<double>(a1) * p_o * (1.0 - p_o) +
               static_cast<double>(a2) * p_v * (1.0 - p_v));
    if (!(var > 0.0)) throw std::domain_error("local_clt_delta: zero variance");
    const Pmf exact = exact_crossing_law(a1, a2, p_o, p_v);
    const double a_N = static_cast<double>(a1) * (2.0 * p_o - 1.0) -
                       static_cast<double>(a2) * (2.0 * p_v - 1.0);
    const double b_N = std::sqrt(var);
    const long long pad = static_cast<long long>(std::ceil(8.0 * b_N)) + 2;
    const Pmf window = gaussian_window_law(a_N, b_N, a1 + a2, exact.kmin() - pad,
                                           exact.kmax() + pad);
    double worst = 0.0;
    window.for_each([&](long long k, double wm) {
        worst = std::max(worst, std::fabs(exact.at(k) - wm));
    });
    return b_N * worst;
}

}  // namespace sawsum
