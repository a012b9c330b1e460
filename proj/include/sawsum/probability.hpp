#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sawsum/mixer.hpp"

namespace sawsum {

// Finite probability mass function on the sublattice 2Z + offset.
class Pmf {
public:
    Pmf() = default;
    // masses[i] is the mass at kmin + 2i; kmin must match offset mod 2.
    Pmf(int offset, long long kmin, std::vector<double> masses);

    static Pmf point(long long k);

    int offset() const { return offset_; }
    long long kmin() const { return kmin_; }
    long long kmax() const { return kmin_ + 2 * (static_cast<long long>(mass_.size()) - 1); }
    std::size_t size() const { return mass_.size(); }
    const std::vector<double>& masses() const { return mass_; }

    double at(long long k) const;
    double total() const;  // compensated sum
    double mean() const;
    double variance() const;
    void normalize();
    // Drops leading/trailing masses below the threshold, then renormalizes.
    void trim(double tail_eps);
    Pmf mirrored() const;  // law of -X

    template <class F>
    void for_each(F&& f) const {  // f(k, mass)
        for (std::size_t i = 0; i < mass_.size(); ++i)
            f(kmin_ + 2 * static_cast<long long>(i), mass_[i]);
    }

private:
    int offset_ = 0;
    long long kmin_ = 0;
    std::vector<double> mass_;
};

// Law of the crossing total of a staircase path: a1 independent +-1 signs
// carrying probability p_o of +1 minus a2 independent signs carrying p_v.
// Computed by direct convolution of the two sign-walk halves (no FFT); tiny
// tails below ~1e-17 of the peak are trimmed and the result renormalized.
Pmf exact_crossing_law(long long a1, long long a2, double p_o, double p_v);

// Discretized centered Gaussian on 2Z + (N mod 2): mass(k) =
// Phi((k+1)/b) - Phi((k-1)/b), built symmetrically, truncated at total tail
// mass < 1e-12 and renormalized.
Pmf symmetrized_law(double b_N, long long N);

// Same window with center a_N (for the local-CLT comparison).
Pmf gaussian_window_law(double a_N, double b_N, long long N, long long kmin, long long kmax);

// Total variation distance; distributions on different parity classes are at
// distance 1.
double tv_distance(const Pmf& p, const Pmf& q);

// Prebuilt maximal coupling of (p, q) for repeated conditional draws.
class MaxCoupling {
public:
    MaxCoupling(Pmf p, Pmf q);

    // Draw from the conditional law of the q-marginal given that the
    // p-marginal equals t. Throws std::domain_error when p(t) = 0.
    long long draw_given(long long t, RandomStream& rs) const;

    double tv() const { return tv_; }
    const Pmf& p() const { return p_; }
    const Pmf& q() const { return q_; }

private:
    Pmf p_, q_;
    double tv_ = 0.0;
    // residual distribution (q - p)_+ / tv as a cdf over its support
    std::vector<long long> res_k_;
    std::vector<double> res_cdf_;
};

long long maximal_coupling_conditional(const Pmf& p, const Pmf& q, long long t,
                                       RandomStream& rs);

struct CltBoundInputs {
    double K = 1.0;        // weight cutoff
    double pi_K = 0.75;    // P(|X| < K), must exceed 1/2
    double sigma2_K = 1.0; // Var(X 1{|X|<K}), must be positive
    double phi_N = 0.0;    // escape threshold
    long long N = 1;       // number of terms
    std::optional<double> lambda;  // Chernoff exponent; derived when absent
};

struct CltBoundTerms {
    double gaussian_term = 0.0;   // 2[Phi(phi_N / (sigma_K sqrt(N/3))) - 1/2]
    double berry_esseen = 0.0;    // 2 C K^3 / (sigma_K^3 sqrt(N/3))
    double chernoff = 0.0;        // exp(-lambda N)
    double total = 0.0;
    double lambda = 0.0;
};

// Upper bound on P(|sum Z_k X_k| <= phi_N) for non-constant X. The
// Berry-Esseen constant defaults to 0.56 and is configurable.
CltBoundTerms clt_bound_eval(const CltBoundInputs& in, double berry_esseen_const = 0.56);

// Scaled worst-case pointwise gap between the exact crossing law and the
// Gaussian window centered at its mean: b_N * sup_k |exact(k) - window(k)|.
double local_clt_delta(long long a1, long long a2, double p_o, double p_v);

}  // namespace sawsum
