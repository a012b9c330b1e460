#include "doctest.h"

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "sawsum/env.hpp"
#include "sawsum/stats.hpp"

using namespace sawsum;

TEST_CASE("edge sampling is deterministic and order independent") {
    const EnvHandle env = make_environment(1, LawSpec::uniform(-1, 1, 0.6, 0.7));
    const EdgeKey k1{3, -5, Orient::H};
    const EdgeKey k2{-2, 7, Orient::V};
    const EdgeValue a1 = env.sample(k1);
    const EdgeValue b1 = env.sample(k2);
    const EdgeValue b2 = env.sample(k2);
    const EdgeValue a2 = env.sample(k1);
    CHECK(a1.x == a2.x);
    CHECK(a1.y == a2.y);
    CHECK(b1.x == b2.x);
    CHECK(b1.y == b2.y);

    const EnvHandle env2 = make_environment(1, LawSpec::uniform(-1, 1, 0.6, 0.7));
    CHECK(env2.sample(k1).x == a1.x);
    const EnvHandle env3 = make_environment(2, LawSpec::uniform(-1, 1, 0.6, 0.7));
    CHECK(env3.sample(k1).x != a1.x);
}

TEST_CASE("constant law gives constant weights") {
    const EnvHandle env = make_environment(1, LawSpec::constant(1.0, 0.5, 0.5));
    for (long long i = -10; i <= 10; ++i) {
        CHECK(env.sample({i, 2 * i, Orient::H}).x == 1.0);
        CHECK(env.sample({i, -i, Orient::V}).x == 1.0);
    }
}

TEST_CASE("overlay entries take precedence over sampled values") {
    OverlayMap ov;
    ov[{0, 0, Orient::H}] = {5.0, +1};
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
        const EnvHandle env = make_environment(seed, LawSpec::uniform(-1, 1), ov);
        const EdgeValue v = env.sample({0, 0, Orient::H});
        CHECK(v.x == 5.0);
        CHECK(v.y == 1);
    }
}

TEST_CASE("degenerate sign probabilities") {
    const EnvHandle env1 = make_environment(7, LawSpec::uniform(-1, 1, 1.0, 0.5));
    for (long long i = 0; i < 50; ++i) CHECK(env1.sample({i, 0, Orient::H}).y == 1);
    const EnvHandle env0 = make_environment(7, LawSpec::uniform(-1, 1, 0.5, 0.0));
    for (long long i = 0; i < 50; ++i) CHECK(env0.sample({i, 0, Orient::V}).y == -1);
}

TEST_CASE("atom frequencies match within 3 sigma") {
    const EnvHandle env =
        make_environment(1, LawSpec::atoms_of({{0.0, 0.7}, {1.0, 0.3}}, 0.5, 0.5));
    const int n = 100000;
    int zeros = 0;
    for (int i = 0; i < n; ++i)
        if (env.sample({i, 0, Orient::H}).x == 0.0) ++zeros;
    const double phat = static_cast<double>(zeros) / n;
    const double se = std::sqrt(0.7 * 0.3 / n);
    CHECK(std::fabs(phat - 0.7) < 3 * se);
}

TEST_CASE("sign frequencies match p_o and p_v within 3 sigma") {
    const EnvHandle env = make_environment(11, LawSpec::uniform(-1, 1, 0.6, 0.8));
    const int n = 100000;
    int ph = 0, pv = 0;
    for (int i = 0; i < n; ++i) {
        if (env.sample({i, 3, Orient::H}).y == 1) ++ph;
        if (env.sample({i, 3, Orient::V}).y == 1) ++pv;
    }
    CHECK(std::fabs(ph / double(n) - 0.6) < 3 * std::sqrt(0.6 * 0.4 / n));
    CHECK(std::fabs(pv / double(n) - 0.8) < 3 * std::sqrt(0.8 * 0.2 / n));
}

TEST_CASE("uniform marginal passes a KS test at the 1% level") {
    const EnvHandle env = make_environment(5, LawSpec::uniform(-1, 1));
    const int n = 100000;
    std::vector<double> xs;
    xs.reserve(n);
    for (int i = 0; i < n; ++i) xs.push_back(env.sample({i, -i, Orient::H}).x);
    const LawSpec law = LawSpec::uniform(-1, 1);
    const double d = ks_one_sample(std::move(xs), [&](double x) { return law.cdf(x); });
    // 1% critical value ~ 1.63 / sqrt(n)
    CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("gaussian marginal passes a KS test at the 1% level") {
    const EnvHandle env = make_environment(5, LawSpec::gaussian(0.5, 2.0));
    const int n = 100000;
    std::vector<double> xs;
    xs.reserve(n);
    for (int i = 0; i < n; ++i) xs.push_back(env.sample({i, 9, Orient::V}).x);
    const LawSpec law = LawSpec::gaussian(0.5, 2.0);
    const double d = ks_one_sample(std::move(xs), [&](double x) { return law.cdf(x); });
    CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("disjoint edge pairs are empirically uncorrelated") {
    const EnvHandle env = make_environment(3, LawSpec::uniform(-1, 1));
    const int n = 10000;
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i) {
        a.push_back(env.sample({2 * i, 0, Orient::H}).x);
        b.push_back(env.sample({2 * i + 1, 0, Orient::H}).x);
    }
    CHECK(std::fabs(correlation(a, b)) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("invalid laws are rejected") {
    CHECK_THROWS_AS(make_environment(1, LawSpec::gaussian(0, -1)), std::invalid_argument);
    CHECK_THROWS_AS(make_environment(1, LawSpec::atoms_of({{1.0, 0.5}, {2.0, 0.6}})),
                    std::invalid_argument);
    LawSpec bad = LawSpec::uniform(-1, 1, 1.5, 0.5);
    CHECK_THROWS_AS(make_environment(1, bad), std::invalid_argument);
    CHECK_THROWS_AS(make_environment(1, LawSpec::mixture({})), std::invalid_argument);
}

TEST_CASE("support classification") {
    CHECK(support_class(LawSpec::atoms_of({{1.0, 1.0}})) == SupportClass::FiniteRational);
    CHECK(support_class(LawSpec::atoms_of({{1.0, 0.5}, {std::sqrt(2.0), 0.5}})) ==
          SupportClass::Irrational);
    CHECK(support_class(LawSpec::uniform(-1, 1)) == SupportClass::Irrational);
    CHECK(support_class(LawSpec::atoms_of({{0.5, 0.25}, {1.5, 0.5}, {-2.0, 0.25}})) ==
          SupportClass::FiniteRational);
    CHECK_THROWS_AS(support_class(LawSpec::constant(0.0)), std::invalid_argument);
}

TEST_CASE("axis normalization brings parameters into the standard range") {
    SUBCASE("flip only") {
        const auto [norm, t] = normalize_axes(LawSpec::uniform(-1, 1, 0.3, 0.8));
        CHECK(norm.p_o == 0.7);
        CHECK(norm.p_v == 0.8);
        CHECK(t.flip_h);
        CHECK(!t.flip_v);
        CHECK(!t.swap_xy);
    }
    SUBCASE("swap") {
        const auto [norm, t] = normalize_axes(LawSpec::uniform(-1, 1, 0.9, 0.6));
        CHECK(norm.p_o == 0.6);
        CHECK(norm.p_v == 0.9);
        CHECK(t.swap_xy);
    }
    SUBCASE("transformed environment has normalized marginals") {
        const LawSpec raw = LawSpec::uniform(-1, 1, 0.9, 0.3);
        const auto [norm, t] = normalize_axes(raw);
        CHECK(norm.p_o >= 0.5);
        CHECK(norm.p_o <= norm.p_v);
        const EnvHandle env = make_environment(21, raw, t);
        const int n = 40000;
        int ph = 0, pv = 0;
        for (int i = 0; i < n; ++i) {
            if (env.sample({i, 5, Orient::H}).y == 1) ++ph;
            if (env.sample({i, 5, Orient::V}).y == 1) ++pv;
        }
        CHECK(std::fabs(ph / double(n) - norm.p_o) < 4 * std::sqrt(0.25 / n));
        CHECK(std::fabs(pv / double(n) - norm.p_v) < 4 * std::sqrt(0.25 / n));
    }
}

TEST_CASE("law JSON round trip") {
    const LawSpec law = LawSpec::mixture(
        {{0.3, LawSpec::constant(0.0)}, {0.7, LawSpec::uniform(0.5, 1.5)}}, 0.55, 0.65);
    nlohmann::json j;
    to_json(j, law);
    LawSpec back;
    from_json(j, back);
    CHECK(back.kind == LawSpec::Kind::Mixture);
    CHECK(back.p_o == 0.55);
    CHECK(back.components.size() == 2);
    CHECK(back.components[1].second.a == 0.5);
}
