#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "pqdtw/series.hpp"
#include "test_support.hpp"

using namespace pqdtw;

TEST_CASE("TimeSeries rejects short or non-finite input") {
    CHECK_THROWS_AS(TimeSeries(std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TimeSeries(std::vector<double>{1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(TimeSeries(std::vector<double>{1.0, INFINITY}), std::invalid_argument);
    CHECK(TimeSeries(std::vector<double>{1.0, 2.0}).size() == 2);
}

TEST_CASE("z_normalize") {
    SUBCASE("[1,2,3]") {
        // mean 2, population sd sqrt(2/3)
        const double sd = std::sqrt(2.0 / 3.0);
        auto z = z_normalize(std::vector<double>{1, 2, 3});
        CHECK(z[0] == doctest::Approx(-1.0 / sd).epsilon(1e-12));
        CHECK(z[0] == doctest::Approx(-1.2247).epsilon(1e-4));
        CHECK(z[1] == doctest::Approx(0.0));
        CHECK(z[2] == doctest::Approx(1.2247).epsilon(1e-4));
    }
    SUBCASE("constant series maps to zeros") {
        auto z = z_normalize(std::vector<double>{5, 5, 5});
        for (double v : z) CHECK(v == 0.0);
    }
    SUBCASE("idempotent on random series") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 200; ++trial) {
            auto s = oracle::random_values(rng, 2 + trial % 50, -100, 100);
            auto once = z_normalize(s);
            auto twice = z_normalize(once.span());
            for (std::size_t i = 0; i < s.size(); ++i) CHECK(twice[i] == doctest::Approx(once[i]).epsilon(1e-9));
            double mean = 0, var = 0;
            for (double v : once) mean += v;
            mean /= static_cast<double>(s.size());
            for (double v : once) var += (v - mean) * (v - mean);
            CHECK(std::abs(mean) < 1e-9);
            CHECK(var / static_cast<double>(s.size()) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("resample_linear") {
    auto r = resample_linear(std::vector<double>{0, 1}, 3);
    CHECK(r.values() == std::vector<double>{0, 0.5, 1});

    auto ramp = resample_linear(std::vector<double>{0, 3}, 4);
    CHECK(ramp.values() == std::vector<double>{0, 1, 2, 3});

    std::mt19937_64 rng(1);
    auto s = oracle::random_values(rng, 17);
    CHECK(resample_linear(s, 17).values() == s);

    CHECK_THROWS_AS(resample_linear(s, 1), std::invalid_argument);

    SUBCASE("endpoints exact and ramps reproduced through up/down sampling") {
        for (std::size_t k = 2; k < 40; ++k) {
            std::vector<double> line(k);
            for (std::size_t i = 0; i < k; ++i) line[i] = 0.5 + 2.0 * static_cast<double>(i);
            auto up = resample_linear(line, 2 * k);
            CHECK(up[0] == line.front());
            CHECK(up[2 * k - 1] == line.back());
            auto back = resample_linear(up.span(), k);
            for (std::size_t i = 0; i < k; ++i) CHECK(back[i] == doctest::Approx(line[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("UCR TSV parsing") {
    auto d = parse_ucr_tsv("1\t0.0\t1.0\n2\t1.0\t0.0");
    CHECK(d.size() == 2);
    CHECK(d.length() == 2);
    CHECK(d.labels() == std::vector<std::string>{"1", "2"});
    CHECK(d[1].values() == std::vector<double>{1.0, 0.0});

    CHECK_THROWS_AS(parse_ucr_tsv(""), ParseError);

    try {
        parse_ucr_tsv("a\t1\t2\nb\t1\t2\t3\n", "f.tsv");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("f.tsv:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_ucr_tsv("a\t1\tx\n"), ParseError);
    CHECK_THROWS_AS(load_ucr_tsv("/nonexistent/file.tsv"), ParseError);
}

TEST_CASE("UCR TSV round trip preserves values") {
    std::mt19937_64 rng(3);
    std::vector<TimeSeries> s;
    std::vector<std::string> l;
    for (int i = 0; i < 20; ++i) {
        s.push_back(oracle::random_series(rng, 9));
        l.push_back(std::to_string(i % 3));
    }
    LabeledDataset d(std::move(s), std::move(l));
    const auto path = std::filesystem::temp_directory_path() / "pqdtw_series_roundtrip.tsv";
    save_ucr_tsv(d, path);
    auto back = load_ucr_tsv(path);
    std::filesystem::remove(path);
    CHECK(back.labels() == d.labels());
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(back[i] == d[i]);
}

TEST_CASE("LabeledDataset invariants") {
    std::vector<TimeSeries> s{TimeSeries({1, 2}), TimeSeries({1, 2, 3})};
    CHECK_THROWS_AS(LabeledDataset{s}, std::invalid_argument);
    std::vector<TimeSeries> ok{TimeSeries({1, 2}), TimeSeries({3, 4})};
    CHECK_THROWS_AS(LabeledDataset(ok, {"a"}), std::invalid_argument);
    LabeledDataset d(ok, {"a", "b"});
    CHECK(d.distinct_labels() == std::vector<std::string>{"a", "b"});
}
