#include "doctest.h"

#include <cmath>
#include <vector>

#include "sawsum/geometry.hpp"
#include "sawsum/mixer.hpp"

using namespace sawsum;

namespace {
PathSeq path_of(std::vector<Vertex> vs) { return PathSeq::from_vertices(std::move(vs)); }

// random self-avoiding-ish walk (retries until it can move)
PathSeq random_path(RandomStream& rs, int len) {
    std::vector<Vertex> vs{{0, 0}};
    const Vertex dirs[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int i = 0; i < len; ++i) {
        const Vertex d = dirs[rs.next_u64() % 4];
        vs.push_back(vs.back() + d);
    }
    return PathSeq::from_vertices(std::move(vs));
}
}  // namespace

TEST_CASE("crossing signs") {
    CHECK(crossing_sign({0, 0}, {1, 0}, +1) == +1);
    CHECK(crossing_sign({1, 0}, {0, 0}, +1) == -1);
    CHECK(crossing_sign({0, 0}, {0, 1}, -1) == -1);
    CHECK(crossing_sign({0, 0}, {0, -1}, -1) == +1);
    CHECK_THROWS_AS(crossing_sign({0, 0}, {2, 0}, 1), std::invalid_argument);
}

TEST_CASE("path sums on planted edges") {
    OverlayMap ov;
    ov[{0, 0, Orient::H}] = {2.5, +1};
    const EnvHandle env = make_environment(1, LawSpec::uniform(-1, 1), ov);

    SUBCASE("empty path") {
        const PathSums ps = path_sums(path_of({}), env);
        CHECK(ps.T.empty());
        CHECK(ps.S.empty());
    }
    SUBCASE("single rightward edge") {
        const PathSums ps = path_sums(path_of({{0, 0}, {1, 0}}), env);
        REQUIRE(ps.T.size() == 1);
        CHECK(ps.T[0] == 1);
        CHECK(ps.S[0] == 2.5);
    }
    SUBCASE("a crossing and its reversal cancel") {
        const PathSums ps = path_sums(path_of({{0, 0}, {1, 0}, {0, 0}}), env);
        REQUIRE(ps.S.size() == 2);
        CHECK(ps.S[0] == 2.5);
        CHECK(ps.S[1] == 0.0);
        CHECK(ps.T[1] == 0);
    }
}

TEST_CASE("concatenation") {
    const PathSeq a = path_of({{0, 0}, {1, 0}, {1, 1}, {2, 1}});
    const PathSeq b = path_of({{2, 1}, {2, 2}, {3, 2}});
    const PathSeq c = concatenate(a, b);
    CHECK(c.length() == 5);
    CHECK(c.last() == Vertex{3, 2});
    CHECK_THROWS_AS(concatenate(b, a), std::invalid_argument);

    SUBCASE("junction revisiting flags self avoidance") {
        const PathSeq d = concatenate(c, path_of({{3, 2}, {2, 2}}));
        CHECK(!d.is_self_avoiding());
        CHECK(c.is_self_avoiding());
    }
    SUBCASE("sums are additive at the junction") {
        const EnvHandle env = make_environment(9, LawSpec::uniform(-1, 1, 0.7, 0.6));
        const PathSums pa = path_sums(a, env);
        const PathSums pc = path_sums(c, env);
        CHECK(pc.S[a.length() - 1] == doctest::Approx(pa.S.back()).epsilon(1e-14));
        const PathSums pb = path_sums(b, env);
        CHECK(pc.S.back() ==
              doctest::Approx(pa.S.back() + pb.S.back()).epsilon(1e-12));
        CHECK(pc.T.back() == pa.T.back() + pb.T.back());
    }
    SUBCASE("associativity") {
        const PathSeq e = path_of({{3, 2}, {4, 2}});
        const PathSeq lhs = concatenate(concatenate(a, b), e);
        const PathSeq rhs = concatenate(a, concatenate(b, e));
        CHECK(lhs.vertices() == rhs.vertices());
    }
}

TEST_CASE("cycle repetition") {
    const PathSeq cyc = path_of({{0, 0}, {1, 0}, {1, -1}, {0, -1}, {0, 0}});
    const PathSeq c3 = repeat_cycle(cyc, 3);
    CHECK(c3.length() == 12);
    const EnvHandle env = make_environment(4, LawSpec::uniform(-1, 1));
    const PathSums p1 = path_sums(cyc, env);
    const PathSums p3 = path_sums(c3, env);
    CHECK(p3.S.back() == doctest::Approx(3.0 * p1.S.back()).epsilon(1e-12));
}

TEST_CASE("reversal flips sums") {
    RandomStream rs(42, 0, 0);
    const EnvHandle env = make_environment(13, LawSpec::gaussian(0, 1, 0.55, 0.75));
    for (int trial = 0; trial < 200; ++trial) {
        const PathSeq p = random_path(rs, 1 + static_cast<int>(rs.next_u64() % 30));
        const PathSeq r = reverse(p);
        const PathSums ps = path_sums(p, env);
        const PathSums rsu = path_sums(r, env);
        CHECK(rsu.S.back() == doctest::Approx(-ps.S.back()).epsilon(1e-11));
        CHECK(rsu.T.back() == -ps.T.back());
        CHECK(reverse(r).vertices() == p.vertices());
    }
}

TEST_CASE("translate and truncate") {
    const PathSeq a = path_of({{0, 0}, {1, 0}, {1, 1}, {2, 1}});
    CHECK(translate(a, {0, 0}).vertices() == a.vertices());
    const PathSeq t = translate(a, {3, -2});
    CHECK(t.vertex(0) == Vertex{3, -2});
    CHECK(t.length() == a.length());
    CHECK(truncate(a, 0, a.length()).vertices() == a.vertices());
    const PathSeq mid = truncate(a, 1, 3);
    CHECK(mid.vertex(0) == Vertex{1, 0});
    CHECK(mid.last() == Vertex{2, 1});
    CHECK_THROWS_AS(truncate(a, 2, 2), std::invalid_argument);
}

TEST_CASE("crossing totals change by one per step and match parity") {
    RandomStream rs(7, 1, 2);
    const EnvHandle env = make_environment(3, LawSpec::uniform(-1, 1, 0.6, 0.9));
    for (int trial = 0; trial < 100; ++trial) {
        const PathSeq p = random_path(rs, 40);
        const PathSums ps = path_sums(p, env);
        long long prev = 0;
        for (std::size_t i = 0; i < ps.T.size(); ++i) {
            CHECK(std::llabs(ps.T[i] - prev) == 1);
            prev = ps.T[i];
            CHECK(((ps.T[i] % 2) + 2) % 2 == static_cast<long long>((i + 1) % 2));
        }
    }
}

// If some |a_k| exceeds A then some prefix sum exceeds A/2 in absolute value.
TEST_CASE("prefix sums remember a large term") {
    const auto check_seq = [](const std::vector<double>& xs) {
        double big = 0.0;
        for (double x : xs) big = std::max(big, std::fabs(x));
        if (big == 0.0) return;
        const double a = big * (1.0 - 1e-12);
        double run = 0.0, sup = 0.0;
        for (double x : xs) {
            run += x;
            sup = std::max(sup, std::fabs(run));
        }
        CHECK(sup > a / 2.0);
    };
    SUBCASE("adversarial alternation") {
        check_seq({1.0, -1.0, 1.0, -1.0, 1.0});
        check_seq({0.5, -1.0, 0.5, 0.5, -1.0});
        check_seq({-3.0, 1.5, 1.5, -3.0, 3.0});
        check_seq({1e-9, 2.0, -1.0 - 1e-9, -1.0});
    }
    SUBCASE("random sequences") {
        RandomStream rs(99, 0, 0);
        for (int t = 0; t < 500; ++t) {
            std::vector<double> xs;
            const int len = 1 + static_cast<int>(rs.next_u64() % 40);
            for (int i = 0; i < len; ++i) xs.push_back(2.0 * rs.next_u01() - 1.0);
            check_seq(xs);
        }
    }
}
