#include "sawsum/law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sawsum/stats.hpp"

namespace sawsum {

LawSpec LawSpec::constant(double c, double po, double pv) {
    LawSpec l;
    l.kind = Kind::Constant;
    l.a = c;
    l.p_o = po;
    l.p_v = pv;
    return l;
}

LawSpec LawSpec::atoms_of(std::vector<Atom> as, double po, double pv) {
    LawSpec l;
    l.kind = Kind::Atoms;
    l.atoms = std::move(as);
    l.p_o = po;
    l.p_v = pv;
    return l;
}

LawSpec LawSpec::uniform(double lo, double hi, double po, double pv) {
    LawSpec l;
    l.kind = Kind::Uniform;
    l.a = lo;
    l.b = hi;
    l.p_o = po;
    l.p_v = pv;
    return l;
}

LawSpec LawSpec::gaussian(double mu, double sigma, double po, double pv) {
    LawSpec l;
    l.kind = Kind::Gaussian;
    l.a = mu;
    l.b = sigma;
    l.p_o = po;
    l.p_v = pv;
    return l;
}

LawSpec LawSpec::mixture(std::vector<std::pair<double, LawSpec>> cs, double po, double pv) {
    LawSpec l;
    l.kind = Kind::Mixture;
    l.components = std::move(cs);
    l.p_o = po;
    l.p_v = pv;
    return l;
}

void LawSpec::validate() const {
    if (!(p_o >= 0.0 && p_o <= 1.0) || !(p_v >= 0.0 && p_v <= 1.0))
        throw std::invalid_argument("LawSpec: p_o and p_v must lie in [0,1]");
    switch (kind) {
        case Kind::Constant:
            break;
        case Kind::Atoms: {
            if (atoms.empty()) throw std::invalid_argument("LawSpec: empty atom list");
            double total = 0.0;
            for (const Atom& at : atoms) {
                if (at.prob < 0.0) throw std::invalid_argument("LawSpec: negative atom weight");
                total += at.prob;
            }
            if (std::fabs(total - 1.0) > 1e-12)
                throw std::invalid_argument("LawSpec: atom weights must sum to 1");
            break;
        }
        case Kind::Uniform:
            if (!(a <= b)) throw std::invalid_argument("LawSpec: uniform needs a <= b");
            break;
        case Kind::Gaussian:
            if (b < 0.0) throw std::invalid_argument("LawSpec: sigma < 0");
            break;
        case Kind::Mixture: {
            if (components.empty()) throw std::invalid_argument("LawSpec: empty mixture");
            double total = 0.0;
            for (const auto& [w, sub] : components) {
                if (w < 0.0) throw std::invalid_argument("LawSpec: negative mixture weight");
                total += w;
                sub.validate();
            }
            if (std::fabs(total - 1.0) > 1e-12)
                throw std::invalid_argument("LawSpec: mixture weights must sum to 1");
            break;
        }
    }
}

double LawSpec::sample(RandomStream& rs) const {
    switch (kind) {
        case Kind::Constant:
            return a;
        case Kind::Atoms: {
            const double u = rs.next_u01();
            double acc = 0.0;
            for (const Atom& at : atoms) {
                acc += at.prob;
                if (u < acc) return at.value;
            }
            return atoms.back().value;
        }
        case Kind::Uniform:
            return a + rs.next_u01() * (b - a);
        case Kind::Gaussian: {
            if (b == 0.0) return a;
            double u = rs.next_u01();
            if (u <= 0.0) u = 0x1.0p-53;
            return a + b * norm_ppf(u);
        }
        case Kind::Mixture: {
            const double u = rs.next_u01();
            double acc = 0.0;
            for (const auto& [w, sub] : components) {
                acc += w;
                if (u < acc) return sub.sample(rs);
            }
            return components.back().second.sample(rs);
        }
    }
    return 0.0;
}

double LawSpec::cdf(double x) const {
    switch (kind) {
        case Kind::Constant:
            return x >= a ? 1.0 : 0.0;
        case Kind::Atoms: {
            double acc = 0.0;
            for (const Atom& at : atoms)
                if (at.value <= x) acc += at.prob;
            return acc;
        }
        case Kind::Uniform:
            if (x < a) return 0.0;
            if (x >= b) return 1.0;
            return b > a ? (x - a) / (b - a) : 1.0;
        case Kind::Gaussian:
            if (b == 0.0) return x >= a ? 1.0 : 0.0;
            return norm_cdf((x - a) / b);
        case Kind::Mixture: {
            double acc = 0.0;
            for (const auto& [w, sub] : components) acc += w * sub.cdf(x);
            return acc;
        }
    }
    return 0.0;
}

double LawSpec::cdf_left(double x) const {
    switch (kind) {
        case Kind::Constant:
            return x > a ? 1.0 : 0.0;
        case Kind::Atoms: {
            double acc = 0.0;
            for (const Atom& at : atoms)
                if (at.value < x) acc += at.prob;
            return acc;
        }
        case Kind::Uniform:
        case Kind::Gaussian:
            return cdf(x);  // no atoms
        case Kind::Mixture: {
            double acc = 0.0;
            for (const auto& [w, sub] : components) acc += w * sub.cdf_left(x);
            return acc;
        }
    }
    return 0.0;
}

double LawSpec::abs_cdf(double t) const {
    if (t < 0.0) return 0.0;
    return cdf(t) - cdf_left(-t);
}

double LawSpec::abs_quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("abs_quantile: p outside [0,1]");
    if (abs_cdf(0.0) >= p) return 0.0;
    double hi = 1.0;
    while (abs_cdf(hi) < p && hi < 1e300) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (abs_cdf(mid) >= p)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

bool LawSpec::is_delta_zero() const {
    switch (kind) {
        case Kind::Constant:
            return a == 0.0;
        case Kind::Atoms: {
            for (const Atom& at : atoms)
                if (at.prob > 0.0 && at.value != 0.0) return false;
            return true;
        }
        case Kind::Uniform:
            return a == 0.0 && b == 0.0;
        case Kind::Gaussian:
            return a == 0.0 && b == 0.0;
        case Kind::Mixture: {
            for (const auto& [w, sub] : components)
                if (w > 0.0 && !sub.is_delta_zero()) return false;
            return true;
        }
    }
    return false;
}

bool LawSpec::has_continuous_part() const {
    switch (kind) {
        case Kind::Constant:
        case Kind::Atoms:
            return false;
        case Kind::Uniform:
            return b > a;
        case Kind::Gaussian:
            return b > 0.0;
        case Kind::Mixture:
            for (const auto& [w, sub] : components)
                if (w > 0.0 && sub.has_continuous_part()) return true;
            return false;
    }
    return false;
}

std::optional<double> LawSpec::sup_abs() const {
    switch (kind) {
        case Kind::Constant:
            return std::fabs(a);
        case Kind::Atoms: {
            double m = 0.0;
            for (const Atom& at : atoms)
                if (at.prob > 0.0) m = std::max(m, std::fabs(at.value));
            return m;
        }
        case Kind::Uniform:
            return std::max(std::fabs(a), std::fabs(b));
        case Kind::Gaussian:
            if (b == 0.0) return std::fabs(a);
            return std::nullopt;
        case Kind::Mixture: {
            double m = 0.0;
            for (const auto& [w, sub] : components) {
                if (w <= 0.0) continue;
                const auto s = sub.sup_abs();
                if (!s) return std::nullopt;
                m = std::max(m, *s);
            }
            return m;
        }
    }
    return std::nullopt;
}

std::vector<LawSpec::Atom> LawSpec::flat_atoms() const {
    std::vector<Atom> out;
    switch (kind) {
        case Kind::Constant:
            out.push_back({a, 1.0});
            break;
        case Kind::Atoms:
            out = atoms;
            break;
        case Kind::Uniform:
            if (a == b) out.push_back({a, 1.0});
            break;
        case Kind::Gaussian:
            if (b == 0.0) out.push_back({a, 1.0});
            break;
        case Kind::Mixture:
            for (const auto& [w, sub] : components) {
                if (w <= 0.0) continue;
                for (const Atom& at : sub.flat_atoms()) out.push_back({at.value, w * at.prob});
            }
            break;
    }
    return out;
}

bool LawSpec::has_nonzero_atom() const {
    for (const Atom& at : flat_atoms())
        if (at.prob > 0.0 && at.value != 0.0) return true;
    return false;
}

std::string LawSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Constant:
            os << "constant(" << a << ")";
            break;
        case Kind::Atoms: {
            os << "atoms[";
            for (std::size_t i = 0; i < atoms.size(); ++i)
                os << (i ? ", " : "") << "(" << atoms[i].value << "," << atoms[i].prob << ")";
            os << "]";
            break;
        }
        case Kind::Uniform:
            os << "uniform(" << a << "," << b << ")";
            break;
        case Kind::Gaussian:
            os << "gaussian(" << a << "," << b << ")";
            break;
        case Kind::Mixture: {
            os << "mixture[";
            for (std::size_t i = 0; i < components.size(); ++i)
                os << (i ? ", " : "") << components[i].first << ":"
                   << components[i].second.describe();
            os << "]";
            break;
        }
    }
    return os.str();
}

std::optional<std::pair<long long, long long>> rational_approx(double x, long long qmax,
                                                               double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    const double sign = x < 0.0 ? -1.0 : 1.0;
    double r = std::fabs(x);
    long long p_prev = 1, q_prev = 0;
    long long p_cur = static_cast<long long>(std::floor(r));
    long long q_cur = 1;
    double frac = r - std::floor(r);
    for (int it = 0; it < 64; ++it) {
        const double approx = static_cast<double>(p_cur) / static_cast<double>(q_cur);
        if (std::fabs(r - approx) <= tol)
            return std::make_pair(static_cast<long long>(sign) * p_cur, q_cur);
        if (frac == 0.0) break;
        const double inv = 1.0 / frac;
        const double aterm = std::floor(inv);
        if (aterm > 9.0e18) break;
        frac = inv - aterm;
        const long long ai = static_cast<long long>(aterm);
        const long long p_next = ai * p_cur + p_prev;
        const long long q_next = ai * q_cur + q_prev;
        if (q_next > qmax || q_next <= 0 || p_next < 0) break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    return std::nullopt;
}

SupportClass support_class(const LawSpec& law) {
    if (law.is_delta_zero())
        throw std::invalid_argument("support_class: law is a point mass at zero");
    if (law.has_continuous_part()) return SupportClass::Irrational;

    std::vector<double> vals;
    for (const LawSpec::Atom& at : law.flat_atoms())
        if (at.prob > 0.0 && at.value != 0.0) vals.push_back(at.value);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.empty())
        throw std::invalid_argument("support_class: no non-zero support");

    // Ratios must admit a small-denominator rational representation. The
    // tolerance is far below what a denominator <= 1e4 can achieve for a
    // generic irrational, so sqrt(2)-style ratios are classified irrational.
    const double base = vals.front();
    for (double v : vals) {
        if (!rational_approx(v / base, 10000, 1e-12 * std::max(1.0, std::fabs(v / base))))
            return SupportClass::Irrational;
    }
    // The grammar only produces finite atom lists, so rational-ratio supports
    // are finite rational; CountablyRational is reserved for future grammars.
    return SupportClass::FiniteRational;
}

const char* to_string(SupportClass c) {
    switch (c) {
        case SupportClass::FiniteRational: return "finite_rational";
        case SupportClass::CountablyRational: return "countably_rational";
        case SupportClass::Irrational: return "irrational";
    }
    return "?";
}

void to_json(nlohmann::json& j, const LawSpec& law) {
    j = nlohmann::json::object();
    j["p_o"] = law.p_o;
    j["p_v"] = law.p_v;
    switch (law.kind) {
        case LawSpec::Kind::Constant:
            j["kind"] = "constant";
            j["value"] = law.a;
            break;
        case LawSpec::Kind::Atoms: {
            j["kind"] = "atoms";
            auto arr = nlohmann::json::array();
            for (const auto& at : law.atoms) arr.push_back({at.value, at.prob});
            j["atoms"] = std::move(arr);
            break;
        }
        case LawSpec::Kind::Uniform:
            j["kind"] = "uniform";
            j["a"] = law.a;
            j["b"] = law.b;
            break;
        case LawSpec::Kind::Gaussian:
            j["kind"] = "gaussian";
            j["mu"] = law.a;
            j["sigma"] = law.b;
            break;
        case LawSpec::Kind::Mixture: {
            j["kind"] = "mixture";
            auto arr = nlohmann::json::array();
            for (const auto& [w, sub] : law.components) {
                nlohmann::json sj;
                to_json(sj, sub);
                sj.erase("p_o");
                sj.erase("p_v");
                arr.push_back({w, std::move(sj)});
            }
            j["components"] = std::move(arr);
            break;
        }
    }
}

void from_json(const nlohmann::json& j, LawSpec& law) {
    const std::string kind = j.at("kind").get<std::string>();
    law = LawSpec{};
    if (j.contains("p_o")) law.p_o = j.at("p_o").get<double>();
    if (j.contains("p_v")) law.p_v = j.at("p_v").get<double>();
    if (kind == "constant") {
        law.kind = LawSpec::Kind::Constant;
        law.a = j.at("value").get<double>();
    } else if (kind == "atoms") {
        law.kind = LawSpec::Kind::Atoms;
        for (const auto& e : j.at("atoms"))
            law.atoms.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
    } else if (kind == "uniform") {
        law.kind = LawSpec::Kind::Uniform;
        law.a = j.at("a").get<double>();
        law.b = j.at("b").get<double>();
    } else if (kind == "gaussian") {
        law.kind = LawSpec::Kind::Gaussian;
        law.a = j.at("mu").get<double>();
        law.b = j.at("sigma").get<double>();
    } else if (kind == "mixture") {
        law.kind = LawSpec::Kind::Mixture;
        for (const auto& e : j.at("components")) {
            LawSpec sub;
            from_json(e.at(1), sub);
            law.components.emplace_back(e.at(0).get<double>(), std::move(sub));
        }
    } else {
        throw std::invalid_argument("LawSpec: unknown kind '" + kind + "'");
    }
    law.validate();
}

}  // namespace sawsum
