#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "sawsum/probability.hpp"
#include "sawsum/stats.hpp"

using namespace sawsum;

TEST_CASE("exact crossing law, small cases") {
    SUBCASE("single horizontal step") {
        const Pmf p = exact_crossing_law(1, 0, 0.6, 0.9);
        CHECK(p.at(1) == doctest::Approx(0.6));
        CHECK(p.at(-1) == doctest::Approx(0.4));
    }
    SUBCASE("one step each way at one half") {
        const Pmf p = exact_crossing_law(1, 1, 0.5, 0.5);
        CHECK(p.at(-2) == doctest::Approx(0.25));
        CHECK(p.at(0) == doctest::Approx(0.5));
        CHECK(p.at(2) == doctest::Approx(0.25));
    }
    SUBCASE("mean and variance match the closed forms") {
        for (auto [a1, a2, po, pv] :
             {std::tuple{5LL, 3LL, 0.6, 0.7}, std::tuple{12LL, 7LL, 0.55, 0.95},
              std::tuple{40LL, 0LL, 0.8, 0.8}}) {
            const Pmf p = exact_crossing_law(a1, a2, po, pv);
            const double want_mean = a1 * (2 * po - 1) - a2 * (2 * pv - 1);
            const double want_var = 4.0 * (a1 * po * (1 - po) + a2 * pv * (1 - pv));
            CHECK(p.mean() == doctest::Approx(want_mean).epsilon(1e-9));
            CHECK(p.variance() == doctest::Approx(want_var).epsilon(1e-9));
            CHECK(p.total() == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    SUBCASE("degenerate probabilities give a point mass") {
        const Pmf p = exact_crossing_law(3, 2, 1.0, 1.0);
        CHECK(p.at(1) == doctest::Approx(1.0));
    }
}

TEST_CASE("symmetrized law") {
    SUBCASE("total mass and symmetry") {
        for (double b : {0.7, 2.0, 11.3}) {
            for (long long N : {6LL, 7LL}) {
                const Pmf s = symmetrized_law(b, N);
                CHECK(s.total() == doctest::Approx(1.0).epsilon(1e-12));
                s.for_each([&](long long k, double m) {
                    CHECK(m == doctest::Approx(s.at(-k)).epsilon(0));
                });
            }
        }
    }
    SUBCASE("central mass at b=2, even parity") {
        const Pmf s = symmetrized_law(2.0, 10);
        CHECK(s.at(0) == doctest::Approx(0.38292).epsilon(1e-4));
    }
    CHECK_THROWS_AS(symmetrized_law(0.0, 4), std::domain_error);
}

TEST_CASE("total variation distance") {
    const Pmf p(1, -1, {0.4, 0.6});
    SUBCASE("identity") { CHECK(tv_distance(p, p) == 0.0); }
    SUBCASE("disjoint supports") {
        const Pmf q(1, 3, {1.0});
        CHECK(tv_distance(p, q) == doctest::Approx(1.0));
        const Pmf r(0, 0, {1.0});
        CHECK(tv_distance(p, r) == 1.0);  // different parity classes
    }
    SUBCASE("half L1") {
        const Pmf q(1, -1, {0.5, 0.5});
        CHECK(tv_distance(p, q) == doctest::Approx(0.1));
    }
}

TEST_CASE("maximal coupling conditional draws") {
    RandomStream rs(77, 0, 0);
    SUBCASE("identical laws always keep the value") {
        const Pmf p(0, -2, {0.3, 0.4, 0.3});
        for (int i = 0; i < 200; ++i)
            CHECK(maximal_coupling_conditional(p, p, 0, rs) == 0);
    }
    SUBCASE("disjoint supports never keep the value") {
        const Pmf p(0, 0, {1.0});
        const Pmf q(0, 4, {1.0});
        const MaxCoupling c(p, q);
        for (int i = 0; i < 100; ++i) CHECK(c.draw_given(0, rs) == 4);
    }
    SUBCASE("agreement frequency matches 1 - TV") {
        const Pmf p(1, -1, {0.4, 0.6});
        const Pmf q(1, -1, {0.5, 0.5});
        const MaxCoupling c(p, q);
        const int n = 100000;
        int agree = 0;
        for (int i = 0; i < n; ++i) {
            const long long t = rs.next_u01() < 0.6 ? 1 : -1;
            if (c.draw_given(t, rs) == t) ++agree;
        }
        const double phat = static_cast<double>(agree) / n;
        CHECK(std::fabs(phat - 0.9) < 3.0 * std::sqrt(0.9 * 0.1 / n));
    }
    SUBCASE("conditioning on a null atom fails") {
        const Pmf p(0, 0, {1.0});
        CHECK_THROWS_AS(maximal_coupling_conditional(p, p, 2, rs), std::domain_error);
    }
}

TEST_CASE("maximal coupling marginal matches the target law") {
    // aggregate conditional draws over inputs from p; the output must be q
    const Pmf p = exact_crossing_law(6, 3, 0.6, 0.7);
    const Pmf q = symmetrized_law(std::sqrt(p.variance()), 9);
    const MaxCoupling c(p, q);
    RandomStream rs(123, 4, 5);
    std::map<long long, long long> hist;
    const int n = 100000;
    // inverse-cdf sampler for p
    std::vector<double> cdf;
    std::vector<long long> ks;
    double acc = 0.0;
    p.for_each([&](long long k, double m) {
        acc += m;
        cdf.push_back(acc);
        ks.push_back(k);
    });
    for (int i = 0; i < n; ++i) {
        const double u = rs.next_u01();
        std::size_t lo = 0;
        while (lo + 1 < cdf.size() && cdf[lo] < u) ++lo;
        const long long t = ks[lo];
        ++hist[c.draw_given(t, rs)];
    }
    // chi-square against q over cells with decent expected counts
    std::vector<double> obs, expd;
    q.for_each([&](long long k, double m) {
        const double e = m * n;
        if (e >= 10.0) {
            expd.push_back(e);
            const auto it = hist.find(k);
            obs.push_back(it == hist.end() ? 0.0 : static_cast<double>(it->second));
        }
    });
    const double stat = chi2_statistic(obs, expd);
    const double crit = chi2_quantile(0.99, static_cast<double>(obs.size() - 1));
    CHECK(stat < crit);
}

TEST_CASE("clt bound evaluation") {
    SUBCASE("zero threshold kills the gaussian term") {
        const CltBoundTerms t = clt_bound_eval({2.0, 0.9, 0.25, 0.0, 10000, {}});
        CHECK(t.gaussian_term == doctest::Approx(0.0));
        CHECK(t.total > 0.0);
    }
    SUBCASE("derived chernoff exponent") {
        const CltBoundTerms t = clt_bound_eval({2.0, 0.9, 0.25, 10.0, 10000, {}});
        const double want = (2.0 / 3.0) * std::log((2.0 / 3.0) / 0.1) +
                            (1.0 / 3.0) * std::log((1.0 / 3.0) / 0.9);
        CHECK(t.lambda == doctest::Approx(want).epsilon(1e-12));
        CHECK(t.chernoff == 0.0);  // exp(-lambda * 1e4) underflows
    }
    SUBCASE("vanishes along N with phi = sqrt(N)/log N") {
        double prev = 3.0;
        bool decreasing_tail = true;
        for (long long N : {1000LL, 10000LL, 100000LL, 1000000LL, 10000000LL}) {
            const double phi = std::sqrt(static_cast<double>(N)) / std::log(double(N));
            const CltBoundTerms t = clt_bound_eval({1.5, 0.8, 0.4, phi, N, {}});
            if (t.total >= prev) decreasing_tail = false;
            prev = t.total;
        }
        CHECK(decreasing_tail);
        CHECK(prev < 0.05);
    }
    SUBCASE("invalid inputs") {
        CHECK_THROWS_AS(clt_bound_eval({1.0, 0.4, 0.5, 1.0, 10, {}}), std::domain_error);
        CHECK_THROWS_AS(clt_bound_eval({1.0, 0.9, 0.0, 1.0, 10, {}}), std::domain_error);
    }
}

TEST_CASE("clt bound dominates a Monte Carlo estimate") {
    // X uniform(-1,1), K = 1: the cutoff never triggers, sigma_K^2 = 1/3
    const CltBoundInputs in{1.0, 1.0, 1.0 / 3.0, 10.0, 10000, {}};
    const CltBoundTerms t = clt_bound_eval(in);
    RandomStream rs(2024, 1, 1);
    const int trials = 2000;
    int inside = 0;
    for (int i = 0; i < trials; ++i) {
        double s = 0.0;
        for (int k = 0; k < in.N; ++k) {
            const double x = 2.0 * rs.next_u01() - 1.0;
            s += (rs.next_u01() < 0.5 ? 1.0 : -1.0) * x;
        }
        if (std::fabs(s) <= in.phi_N) ++inside;
    }
    const double phat = static_cast<double>(inside) / trials;
    const double se = std::sqrt(std::max(phat * (1 - phat), 1e-9) / trials);
    CHECK(phat <= t.total + 3 * se);
    CHECK(t.total < 1.0);  // the instance is informative
}

TEST_CASE("local clt delta") {
    SUBCASE("shrinks with size in the symmetric case") {
        const double d5 = local_clt_delta(5, 5, 0.5, 0.5);
        const double d50 = local_clt_delta(50, 50, 0.5, 0.5);
        CHECK(d50 < d5);
    }
    SUBCASE("zero variance rejected") {
        CHECK_THROWS_AS(local_clt_delta(3, 3, 1.0, 1.0), std::domain_error);
    }
}

TEST_CASE("tv to the symmetrized law decreases along the tessellation sequence") {
    // ratio 1/2 at (0.6, 0.7)
    double prev = 1.0;
    for (long long n : {4LL, 8LL, 16LL, 32LL, 64LL}) {
        const long long a1 = 2 * n, a2 = n;
        const Pmf exact = exact_crossing_law(a1, a2, 0.6, 0.7);
        const Pmf sym = symmetrized_law(std::sqrt(exact.variance()), a1 + a2);
        const double tv = tv_distance(exact, sym);
        CHECK(tv < prev);
        prev = tv;
    }
    CHECK(prev < 0.1);
}
