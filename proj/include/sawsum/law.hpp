#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sawsum/mixer.hpp"

namespace sawsum {

// Declarative description of the edge-weight law, together with the sign
// parameters p_o (horizontal edges) and p_v (vertical edges).
struct LawSpec {
    enum class Kind { Constant, Atoms, Uniform, Gaussian, Mixture };

    struct Atom {
        double value = 0.0;
        double prob = 0.0;
    };

    Kind kind = Kind::Constant;
    double a = 0.0;  // constant value / uniform lower / gaussian mu
    double b = 0.0;  // uniform upper / gaussian sigma
    std::vector<Atom> atoms;
    std::vector<std::pair<double, LawSpec>> components;  // (weight, law)

    double p_o = 0.5;
    double p_v = 0.5;

    static LawSpec constant(double c, double po = 0.5, double pv = 0.5);
    static LawSpec atoms_of(std::vector<Atom> as, double po = 0.5, double pv = 0.5);
    static LawSpec uniform(double lo, double hi, double po = 0.5, double pv = 0.5);
    static LawSpec gaussian(double mu, double sigma, double po = 0.5, double pv = 0.5);
    static LawSpec mixture(std::vector<std::pair<double, LawSpec>> cs, double po = 0.5,
                           double pv = 0.5);

    // Throws std::invalid_argument on bad weights / sigma < 0 / probabilities
    // outside [0,1].
    void validate() const;

    // One draw by inverse CDF; mixtures consume one extra uniform per level
    // for the component choice.
    double sample(RandomStream& rs) const;

    double cdf(double x) const;       // P(X <= x)
    double cdf_left(double x) const;  // P(X < x)
    double abs_cdf(double t) const;   // P(|X| <= t), t >= 0
    // Smallest t with P(|X| <= t) >= p.
    double abs_quantile(double p) const;

    bool is_delta_zero() const;
    bool has_continuous_part() const;
    // sup |X| over the support, or nullopt when unbounded.
    std::optional<double> sup_abs() const;
    // Flattened atom list (value, prob); continuous parts contribute nothing.
    std::vector<Atom> flat_atoms() const;
    bool has_nonzero_atom() const;

    std::string describe() const;
};

enum class SupportClass { FiniteRational, CountablyRational, Irrational };

// Classifies the support by pairwise ratios of the non-zero atoms. Any
// continuous component, or an atom pair whose ratio admits no small rational
// approximation, counts as irrational. Requires a law that is not a point
// mass at zero.
SupportClass support_class(const LawSpec& law);

const char* to_string(SupportClass c);

// Best rational approximation p/q of x with q <= qmax and |x - p/q| <= tol,
// via continued fractions. Returns nullopt when no such convergent exists.
std::optional<std::pair<long long, long long>> rational_approx(double x, long long qmax,
                                                               double tol);

void to_json(nlohmann::json& j, const LawSpec& law);
void from_json(const nlohmann::json& j, LawSpec& law);

}  // namespace sawsum
