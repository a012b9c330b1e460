#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace sawsum {

// Kahan-compensated accumulator.
class Kahan {
public:
    void add(double v) {
        const double y = v - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Standard normal CDF via erfc. Phi(-x) == 1 - Phi(x) holds exactly because
// both tails evaluate the same erfc expression.
double norm_cdf(double x);

// Inverse standard normal CDF, Wichura's algorithm AS 241 (PPND16),
// |error| < 1e-12 over (0,1).
double norm_ppf(double p);

// Regularized lower incomplete gamma P(a,x).
double gamma_p(double a, double x);

// Chi-square quantile by bisection on gamma_p.
double chi2_quantile(double p, double df);

// One-sample chi-square goodness-of-fit p-value helper: returns the statistic;
// compare against chi2_quantile(1-alpha, df).
double chi2_statistic(std::span<const double> observed, std::span<const double> expected);

// Two-sample Kolmogorov-Smirnov distance between empirical samples.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Critical value for the two-sample KS test at level alpha.
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);

// One-sample KS distance against a cdf provided as a callable.
template <class Cdf>
double ks_one_sample(std::vector<double> sample, Cdf&& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(f - lo, hi - f));
    }
    return d;
}

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;
    std::size_t n = 0;
};

MeanVar mean_var(std::span<const double> xs);

// Pearson correlation of paired samples.
double correlation(std::span<const double> xs, std::span<const double> ys);

}  // namespace sawsum
