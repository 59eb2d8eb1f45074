#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pqdtw/dba.hpp"
#include "test_support.hpp"

using namespace pqdtw;
using V = std::vector<double>;

namespace {

double sum_sq_dtw(std::span<const TimeSeries> data, std::span<const double> c, std::size_t r) {
    double s = 0.0;
    for (const auto& x : data) s += oracle::dtw_full_sq(x.values(), c, r);
    return s;
}

std::vector<TimeSeries> two_groups(std::mt19937_64& rng, std::size_t per_group, std::size_t n) {
    std::vector<TimeSeries> out;
    std::normal_distribution<double> noise(0.0, 0.05);
    for (std::size_t g = 0; g < 2; ++g) {
        for (std::size_t i = 0; i < per_group; ++i) {
            V v(n);
            for (std::size_t t = 0; t < n; ++t) {
                const double u = static_cast<double>(t) / static_cast<double>(n);
                v[t] = (g == 0 ? std::sin(6.283 * u) : 3.0 + std::cos(6.283 * u)) + noise(rng);
            }
            out.emplace_back(std::move(v));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("dtw_path is a valid optimal path") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 25, m = 2 + rng() % 25;
        auto a = oracle::random_walk(rng, n), b = oracle::random_walk(rng, m);
        const std::size_t gap = n > m ? n - m : m - n;
        const std::size_t r = gap + rng() % 5;
        auto path = dtw_path(a, b, Window(r));
        REQUIRE(path.front() == std::pair<std::size_t, std::size_t>{0, 0});
        REQUIRE(path.back() == std::pair<std::size_t, std::size_t>{n - 1, m - 1});
        double cost = 0.0;
        for (std::size_t k = 0; k < path.size(); ++k) {
            auto [i, j] = path[k];
            CHECK((i > j ? i - j : j - i) <= r);
            cost += (a[i] - b[j]) * (a[i] - b[j]);
            if (k > 0) {
                auto [pi, pj] = path[k - 1];
                CHECK(i - pi <= 1);
                CHECK(j - pj <= 1);
                CHECK(i + j > pi + pj);
            }
        }
        CHECK(cost == doctest::Approx(oracle::dtw_full_sq(a, b, r)).epsilon(1e-10));
    }
}

TEST_CASE("dba_barycenter") {
    SUBCASE("midpoint of two constant series") {
        std::vector<TimeSeries> members{TimeSeries({0, 0}), TimeSeries({2, 2})};
        auto avg = dba_barycenter(members, TimeSeries({0, 0}), Window::unconstrained());
        CHECK(avg.values() == V{1, 1});
    }
    SUBCASE("single member is a fixed point") {
        std::mt19937_64 rng(1);
        TimeSeries s(oracle::random_walk(rng, 20));
        std::vector<TimeSeries> members{s};
        CHECK(dba_barycenter(members, s, Window(3)).values() == s.values());
    }
    SUBCASE("never increases the sum of squared DTW") {
        std::mt19937_64 rng(44);
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<TimeSeries> members;
            for (int i = 0; i < 6; ++i) members.emplace_back(oracle::random_walk(rng, 20));
            const std::size_t r = 1 + rng() % 6;
            TimeSeries cur = members[0];
            double prev = sum_sq_dtw(members, cur.values(), r);
            for (int step = 0; step < 5; ++step) {
                cur = dba_barycenter(members, cur, Window(r), 1);
                const double now = sum_sq_dtw(members, cur.values(), r);
                CHECK(now <= prev + 1e-9);
                prev = now;
            }
        }
    }
    CHECK_THROWS_AS(dba_barycenter({}, TimeSeries({0, 0}), Window(1)), std::invalid_argument);
}

TEST_CASE("kmeans++ seeds") {
    std::mt19937_64 rng(5);
    std::vector<TimeSeries> data;
    for (int i = 0; i < 30; ++i) data.emplace_back(oracle::random_walk(rng, 16));
    auto s = kmeanspp_seeds(data, 10, Window(2), 9);
    CHECK(s.size() == 10);
    std::sort(s.begin(), s.end());
    CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
    CHECK(kmeanspp_seeds(data, 10, Window(2), 9) == kmeanspp_seeds(data, 10, Window(2), 9));

    std::vector<TimeSeries> same(5, TimeSeries({1, 2, 3}));
    auto dup = kmeanspp_seeds(same, 5, Window(1), 0);
    std::sort(dup.begin(), dup.end());
    CHECK(dup == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK_THROWS_AS(kmeanspp_seeds(same, 6, Window(1), 0), std::invalid_argument);
}

TEST_CASE("dba_kmeans") {
    std::mt19937_64 rng(8);
    std::vector<TimeSeries> data;
    for (int i = 0; i < 12; ++i) data.emplace_back(oracle::random_walk(rng, 18));
    const Window w(3);

    SUBCASE("K = N gives zero inertia") {
        auto model = dba_kmeans(data, {data.size(), w, 30, 10, 1});
        CHECK(model.inertia == 0.0);
        auto sorted = model.assignments;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
    SUBCASE("K = 1 equals DBA from the first seed") {
        auto model = dba_kmeans(data, {1, w, 30, 10, 4});
        const auto seed = kmeanspp_seeds(data, 1, w, 4)[0];
        auto expected = dba_barycenter(data, data[seed], w, 10);
        CHECK(model.centroids[0].values() == expected.values());
        CHECK(model.inertia == doctest::Approx(sum_sq_dtw(data, expected.values(), 3)).epsilon(1e-10));
    }
    SUBCASE("inertia history is non-increasing and matches the final model") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto model = dba_kmeans(data, {3, w, 30, 10, seed});
            for (std::size_t i = 1; i < model.inertia_history.size(); ++i) {
                CHECK(model.inertia_history[i] <= model.inertia_history[i - 1] * (1 + 1e-9) + 1e-9);
            }
            CHECK(model.inertia == model.inertia_history.back());
            double check = 0.0;
            for (std::size_t i = 0; i < data.size(); ++i) {
                check += oracle::dtw_full_sq(data[i].values(),
                                             model.centroids[model.assignments[i]].values(), 3);
            }
            CHECK(model.inertia == doctest::Approx(check).epsilon(1e-9));
        }
    }
    SUBCASE("deterministic for a fixed seed") {
        auto a = dba_kmeans(data, {4, w, 30, 10, 123});
        auto b = dba_kmeans(data, {4, w, 30, 10, 123});
        CHECK(a.assignments == b.assignments);
        for (std::size_t c = 0; c < 4; ++c) CHECK(a.centroids[c].values() == b.centroids[c].values());
    }
    SUBCASE("recovers two well separated groups") {
        auto groups = two_groups(rng, 10, 24);
        auto model = dba_kmeans(groups, {2, Window(2), 30, 10, 7});
        for (std::size_t i = 1; i < 10; ++i) CHECK(model.assignments[i] == model.assignments[0]);
        for (std::size_t i = 11; i < 20; ++i) CHECK(model.assignments[i] == model.assignments[10]);
        CHECK(model.assignments[0] != model.assignments[10]);
    }
    CHECK_THROWS_AS(dba_kmeans(data, {13, w, 30, 10, 0}), std::invalid_argument);
}
