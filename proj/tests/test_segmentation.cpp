#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pqdtw/segmentation.hpp"
#include "test_support.hpp"

using namespace pqdtw;
using V = std::vector<double>;
using I = std::vector<std::size_t>;

TEST_CASE("modwt_scale") {
    SUBCASE("constant rows") {
        auto c = modwt_scale(V(16, 2.5), 4);
        for (std::size_t j = 1; j <= 4; ++j) {
            for (double v : c.level(j)) CHECK(v == 2.5);
        }
    }
    SUBCASE("[0,2,0,2] level 1") {
        auto c = modwt_scale(V{0, 2, 0, 2}, 1);
        CHECK(std::vector<double>(c.level(1).begin(), c.level(1).end()) == V{1, 1, 1, 1});
    }
    SUBCASE("level j is a circular moving average of 2^j samples with unit DC gain") {
        std::mt19937_64 rng(4);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 8 + rng() % 100;
            auto s = oracle::random_values(rng, n);
            std::size_t levels = 1;
            while ((std::size_t{1} << (levels + 1)) <= n && levels < 5) ++levels;
            auto c = modwt_scale(s, levels);
            const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(n);
            for (std::size_t j = 1; j <= levels; ++j) {
                auto ma = oracle::circular_moving_average(s, std::size_t{1} << j);
                auto row = c.level(j);
                CHECK(row.size() == n);
                for (std::size_t i = 0; i < n; ++i) CHECK(row[i] == doctest::Approx(ma[i]).epsilon(1e-12));
                const double row_mean = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(n);
                CHECK(std::abs(row_mean - mean) < 1e-9);
            }
        }
    }
    CHECK_THROWS_AS(modwt_scale(V(7, 0.0), 3), std::invalid_argument);
    CHECK_NOTHROW(modwt_scale(V(8, 0.0), 3));
}

TEST_CASE("segment_points") {
    auto flat = V(32, 1.0);
    CHECK(segment_points(flat, modwt_scale(flat, 3), 3).empty());

    // [0 x 8, 1 x 8] at J = 2: differences are negative (or zero, carrying the
    // negative sign) up to index 7 and positive from index 8 on.
    V step(16, 0.0);
    std::fill(step.begin() + 8, step.end(), 1.0);
    auto pts = segment_points(step, modwt_scale(step, 2), 2);
    CHECK(pts == I{8});

    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        auto s = oracle::random_walk(rng, 64);
        auto p = segment_points(s, modwt_scale(s, 3), 3);
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(p[i] >= 1);
            CHECK(p[i] <= 63);
            if (i > 0) CHECK(p[i] > p[i - 1]);
        }
    }
}

TEST_CASE("plan_segments") {
    SegmentationParams params{4, 5, 3};
    SUBCASE("fallback to fixed splits") {
        auto plan = plan_from_points(I{}, 100, params);
        CHECK(plan.cuts == I{25, 50, 75});
    }
    SUBCASE("right-most point in each tail window") {
        CHECK(plan_from_points(I{23, 48}, 100, params).cuts == I{23, 48, 75});
        CHECK(plan_from_points(I{19, 21, 24, 26, 44, 51}, 100, params).cuts == I{24, 50, 75});
        CHECK(plan_from_points(I{20, 45, 70}, 100, params).cuts == I{20, 45, 70});
    }
    SUBCASE("constant series keeps fixed splits") {
        CHECK(plan_segments(V(100, 3.0), params).cuts == I{25, 50, 75});
    }
    SUBCASE("tail must be shorter than the base length") {
        CHECK_THROWS_AS(plan_segments(V(100, 0.0), SegmentationParams{4, 25, 3}), std::invalid_argument);
    }
    SUBCASE("invariants on random walks") {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 40 + rng() % 200;
            const std::size_t m = 2 + rng() % 5;
            const std::size_t l = n / m;
            const std::size_t t = rng() % l;
            auto s = oracle::random_walk(rng, n);
            auto plan = plan_segments(s, SegmentationParams{m, t, 2});
            REQUIRE(plan.cuts.size() == m - 1);
            for (std::size_t k = 1; k < m; ++k) {
                CHECK(plan.cuts[k - 1] <= k * l);
                CHECK(plan.cuts[k - 1] + t >= k * l);
                if (k > 1) CHECK(plan.cuts[k - 1] > plan.cuts[k - 2]);
            }
        }
    }
}

TEST_CASE("extract_segments") {
    SUBCASE("t = 0 with divisible length is a plain partition") {
        std::mt19937_64 rng(6);
        auto s = oracle::random_values(rng, 60);
        auto parts = segment_series(s, SegmentationParams{4, 0, 3});
        REQUIRE(parts.size() == 4);
        for (std::size_t m = 0; m < 4; ++m) {
            CHECK(parts[m].values() == V(s.begin() + 15 * m, s.begin() + 15 * (m + 1)));
        }
    }
    SUBCASE("two-sample segment resampled to three") {
        SegmentPlan plan;
        plan.cuts = {2};
        plan.segments = 2;
        plan.base_length = 2;
        plan.tail = 1;
        plan.length = 4;
        auto parts = extract_segments(V{0, 1, 5, 9}, plan);
        CHECK(parts[0].values() == V{0, 0.5, 1});
        CHECK(parts[1].values() == V{5, 7, 9});
    }
    SUBCASE("raw pieces concatenate back to the series") {
        std::mt19937_64 rng(9);
        auto s = oracle::random_walk(rng, 128);
        auto plan = plan_segments(s, SegmentationParams{4, 8, 3});
        V joined;
        for (std::size_t m = 0; m < plan.segments; ++m) {
            joined.insert(joined.end(), s.begin() + plan.segment_begin(m), s.begin() + plan.segment_end(m));
            const auto len = plan.segment_end(m) - plan.segment_begin(m);
            if (m + 1 < plan.segments) CHECK(len + 8 >= plan.base_length);
            CHECK(len <= plan.base_length + 8);
        }
        CHECK(joined == s);
        for (const auto& part : extract_segments(s, plan)) {
            CHECK(part.size() == 40);
        }
    }
    SUBCASE("remainder goes to the last segment") {
        auto s = V(103, 0.0);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(i);
        auto plan = plan_segments(s, SegmentationParams{4, 0, 3});
        CHECK(plan.cuts == I{25, 50, 75});
        CHECK(plan.segment_end(3) - plan.segment_begin(3) == 28);
        auto parts = extract_segments(s, plan);
        CHECK(parts[3].size() == 25);
        CHECK(parts[3][0] == 75.0);
        CHECK(parts[3][24] == 102.0);
    }
}
