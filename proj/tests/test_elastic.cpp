#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pqdtw/elastic.hpp"
#include "test_support.hpp"

using namespace pqdtw;
using V = std::vector<double>;

TEST_CASE("euclidean") {
    CHECK(euclidean(V{1, 2, 3}, V{1, 2, 3}) == 0.0);
    CHECK(euclidean(V{0, 0}, V{3, 4}) == 5.0);
    CHECK_THROWS_AS(euclidean(V{0, 0}, V{3, 4, 5}), std::invalid_argument);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        auto a = oracle::random_values(rng, 50), b = oracle::random_values(rng, 50);
        CHECK(euclidean(a, b) == doctest::Approx(oracle::euclid_loop(a, b)).epsilon(1e-9));
    }
}

TEST_CASE("dtw examples") {
    std::mt19937_64 rng(5);
    auto x = oracle::random_values(rng, 30);
    CHECK(dtw(x, x) == 0.0);
    CHECK(dtw(V{0, 0, 1, 0, 0}, V{0, 1, 0, 0, 0}) == 0.0);
    CHECK(oracle::dtw_enumerate_sq(V{0, 0, 1, 0, 0}, V{0, 1, 0, 0, 0}) == 0.0);
    CHECK(dtw(V{1, 2}, V{2, 3}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(oracle::dtw_enumerate_sq(V{1, 2}, V{2, 3}) == 2.0);
}

TEST_CASE("dtw band infeasibility") {
    CHECK_THROWS_AS(dtw(V{1, 2, 3, 4, 5}, V{1, 2}, Window(1)), std::invalid_argument);
    CHECK_NOTHROW(dtw(V{1, 2, 3, 4, 5}, V{1, 2}, Window(3)));
    CHECK_NOTHROW(dtw(V{1, 2, 3, 4, 5}, V{1, 2}));
}

TEST_CASE("dtw matches path enumeration on short series") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 7, m = 2 + rng() % 7;
        auto a = oracle::random_values(rng, n), b = oracle::random_values(rng, m);
        const double expected = std::sqrt(oracle::dtw_enumerate_sq(a, b));
        CHECK(std::abs(dtw(a, b) - expected) <= 1e-9);
        const std::size_t gap = n > m ? n - m : m - n;
        const std::size_t r = gap + rng() % 3;
        CHECK(std::abs(dtw(a, b, Window(r)) - std::sqrt(oracle::dtw_enumerate_sq(a, b, r))) <= 1e-9);
    }
}

TEST_CASE("dtw properties: symmetry and window ordering") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 40;
        auto a = oracle::random_values(rng, n), b = oracle::random_values(rng, n);
        const std::size_t r = rng() % n;
        CHECK(dtw(a, b, Window(r)) == dtw(b, a, Window(r)));
        const double full = dtw(a, b);
        const double banded = dtw(a, b, Window(r));
        CHECK(full <= banded + 1e-12);
        CHECK(banded <= euclidean(a, b) + 1e-12);
        CHECK(dtw(a, b, Window(0)) == doctest::Approx(euclidean(a, b)).epsilon(1e-12));
        CHECK(banded == doctest::Approx(std::sqrt(oracle::dtw_full_sq(a, b, r))).epsilon(1e-12));
    }
}

TEST_CASE("pruned dtw is exact below the bound and flags the rest") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 2 + rng() % 30, m = 2 + rng() % 30;
        auto a = oracle::random_walk(rng, n), b = oracle::random_walk(rng, m);
        const double exact = dtw(a, b);
        CHECK(dtw(a, b, Window::unconstrained(), std::numeric_limits<double>::infinity()) == exact);
        const double ub = exact * std::uniform_real_distribution<double>(0.2, 2.0)(rng);
        const double pruned = dtw(a, b, Window::unconstrained(), ub);
        if (exact <= ub) {
            CHECK(pruned == exact);
        } else {
            CHECK(pruned > ub);
        }
    }
}

TEST_CASE("keogh envelope") {
    auto c = keogh_envelope(V{5, 5, 5}, Window(1));
    CHECK(c.upper == V{5, 5, 5});
    CHECK(c.lower == V{5, 5, 5});
    auto e = keogh_envelope(V{1, 2, 3}, Window(1));
    CHECK(e.upper == V{2, 3, 3});
    CHECK(e.lower == V{1, 1, 2});
    auto f = keogh_envelope(V{4, -1, 7, 2}, Window(10));
    CHECK(f.upper == V{7, 7, 7, 7});
    CHECK(f.lower == V{-1, -1, -1, -1});

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 60;
        auto s = oracle::random_values(rng, n);
        const std::size_t r = rng() % (n + 2);
        auto env = keogh_envelope(s, Window(r));
        auto [up, lo] = oracle::envelope_naive(s, r);
        CHECK(env.upper == up);
        CHECK(env.lower == lo);
        for (std::size_t i = 0; i < n; ++i) CHECK((env.lower[i] <= s[i] && s[i] <= env.upper[i]));
    }
}

TEST_CASE("lb_keogh and lb_kim") {
    auto env = keogh_envelope(V{0, 0}, Window(1));
    CHECK(lb_keogh(V{3, 4}, env) == 5.0);
    auto wide = keogh_envelope(V{-10, 10, 0}, Window(2));
    CHECK(lb_keogh(V{1, 2, 3}, wide) == 0.0);
    CHECK_THROWS_AS(lb_keogh(V{1, 2, 3, 4}, wide), std::invalid_argument);

    CHECK(lb_kim(V{1, 5, 2}, V{1, -3, 2}) == 0.0);
    CHECK(lb_kim(V{0, 0, 0, 0}, V{3, 1, 1, 4}) == 5.0);

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng() % 30;
        auto q = oracle::random_walk(rng, n), c = oracle::random_walk(rng, n);
        const std::size_t r = rng() % n;
        const double d = dtw(q, c, Window(r));
        CHECK(lb_keogh(q, keogh_envelope(c, Window(r))) <= d + 1e-12);
        CHECK(lb_kim(q, c) <= d + 1e-12);
    }
}

TEST_CASE("nn_search_cascaded") {
    std::mt19937_64 rng(77);
    const Window w(4);
    std::vector<TimeSeries> cands;
    std::vector<Envelope> envs;
    for (int i = 0; i < 200; ++i) {
        cands.emplace_back(oracle::random_walk(rng, 24));
        envs.push_back(keogh_envelope(cands.back(), w));
    }

    SUBCASE("exact match") {
        auto nn = nn_search_cascaded(cands[3], cands, envs, w);
        CHECK(nn.distance == 0.0);
        CHECK(nn.index == 3);
    }
    SUBCASE("single candidate") {
        auto q = oracle::random_walk(rng, 24);
        auto nn = nn_search_cascaded(q, std::span(cands).first(1), std::span(envs).first(1), w);
        CHECK(nn.index == 0);
        CHECK(nn.distance == dtw(q, cands[0], w));
    }
    SUBCASE("matches linear scan") {
        for (int trial = 0; trial < 50; ++trial) {
            auto q = oracle::random_walk(rng, 24);
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < cands.size(); ++k) {
                const double d = std::sqrt(oracle::dtw_full_sq(q, cands[k].values(), 4));
                if (d < best_d) {
                    best_d = d;
                    best = k;
                }
            }
            CascadeStats stats;
            auto nn = nn_search_cascaded(q, cands, envs, w, &stats);
            CHECK(nn.index == best);
            CHECK(nn.distance == doctest::Approx(best_d).epsilon(1e-12));
            CHECK(stats.pruned_by_kim + stats.pruned_by_keogh + stats.dtw_computed == cands.size());
        }
    }
    SUBCASE("ties go to the lowest index") {
        std::vector<TimeSeries> dup{cands[5], cands[9], cands[5]};
        std::vector<Envelope> denv{envs[5], envs[9], envs[5]};
        auto nn = nn_search_cascaded(cands[5], dup, denv, w);
        CHECK(nn.index == 0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(nn_search_cascaded(cands[0], {}, {}, w), std::invalid_argument);
        std::vector<Envelope> narrow{keogh_envelope(cands[0], Window(1))};
        CHECK_THROWS_AS(nn_search_cascaded(cands[0], std::span(cands).first(1), narrow, w),
                        std::invalid_argument);
    }
}

TEST_CASE("window percent conversion") {
    CHECK(Window::from_percent(5, 140).radius() == 7);
    CHECK(Window::from_percent(10, 140).radius() == 14);
    CHECK(Window::from_percent(5, 128).radius() == 7);
    CHECK(Window::from_percent(0, 128).radius() == 0);
    CHECK(Window(100).effective(10) == 9);
    CHECK(Window::unconstrained().effective(10) == 9);
}
