#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "pqdtw/io.hpp"
#include "pqdtw/pq.hpp"
#include "test_support.hpp"

using namespace pqdtw;
using V = std::vector<double>;

namespace {

std::vector<TimeSeries> walks(std::uint64_t seed, std::size_t n, std::size_t len) {
    std::mt19937_64 rng(seed);
    std::vector<TimeSeries> out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(oracle::random_walk(rng, len));
    return out;
}

TrainOptions options(std::size_t m, std::size_t t, std::size_t k, std::optional<std::size_t> r,
                     std::uint64_t seed = 1) {
    TrainOptions o;
    o.segmentation = SegmentationParams{m, t, 2};
    o.clusters = k;
    o.window = r ? Window(*r) : Window::unconstrained();
    o.seed = seed;
    return o;
}

std::size_t radius_of(const Codebook& cb) {
    return cb.window.radius().value_or(std::numeric_limits<std::size_t>::max());
}

// Per-segment squared DTW computed from scratch with the reference DP.
double segmentwise_sq(const Codebook& cb, std::span<const double> x, std::span<const double> y) {
    auto xs = segment_series(x, cb.segmentation);
    auto ys = segment_series(y, cb.segmentation);
    double s = 0.0;
    for (std::size_t m = 0; m < xs.size(); ++m) s += oracle::dtw_full_sq(xs[m].values(), ys[m].values(), radius_of(cb));
    return s;
}

}  // namespace

TEST_CASE("lut holds the pairwise DTW matrix when M = 1, t = 0, K = N") {
    auto data = walks(3, 30, 20);
    auto cb = train(data, options(1, 0, 30, std::nullopt));
    REQUIRE(cb.clusters == 30);
    CHECK_NOTHROW(cb.validate());
    auto codes = encode_all(cb, data);
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(cb.centroids[0][codes[i].ids[0]].values() == data[i].values());
        for (std::size_t j = 0; j < data.size(); ++j) {
            const double exact = oracle::dtw_full_sq(data[i].values(), data[j].values());
            CHECK(std::abs(cb.lut_at(0, codes[i].ids[0], codes[j].ids[0]) - exact) <= 1e-9);
            CHECK(std::abs(sym_distance(cb, codes[i], codes[j]) - std::sqrt(exact)) <= 1e-9);
        }
    }
}

TEST_CASE("K = N quantizes every segment losslessly") {
    auto data = walks(4, 12, 48);
    auto cb = train(data, options(3, 4, 12, 3));
    auto codes = encode_all(cb, data);
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = 0; j < data.size(); ++j) {
            CHECK(sym_distance(cb, codes[i], codes[j]) ==
                  doctest::Approx(std::sqrt(segmentwise_sq(cb, data[i], data[j]))).epsilon(1e-9));
        }
    }
}

TEST_CASE("training") {
    auto data = walks(5, 25, 40);
    SUBCASE("deterministic") {
        CHECK(train(data, options(4, 2, 6, 2, 9)) == train(data, options(4, 2, 6, 2, 9)));
    }
    SUBCASE("K is clamped to N") {
        auto cb = train(std::span(data).first(5), options(2, 0, 256, 2));
        CHECK(cb.clusters == 5);
    }
    SUBCASE("lut matches recomputed centroid distances") {
        auto cb = train(data, options(4, 2, 6, 2));
        CHECK(cb.segment_length == 12);
        for (std::size_t m = 0; m < cb.segments(); ++m) {
            for (std::size_t i = 0; i < cb.clusters; ++i) {
                for (std::size_t j = 0; j < cb.clusters; ++j) {
                    CHECK(std::abs(cb.lut_at(m, i, j) - oracle::dtw_full_sq(cb.centroids[m][i].values(),
                                                                          cb.centroids[m][j].values(), 2)) <=
                          1e-9);
                }
                auto [up, lo] = oracle::envelope_naive(cb.centroids[m][i].values(), 2);
                CHECK(cb.envelopes[m][i].upper == up);
                CHECK(cb.envelopes[m][i].lower == lo);
            }
        }
    }
    CHECK_THROWS_AS(train({}, options(1, 0, 2, 1)), std::invalid_argument);
    CHECK_THROWS_AS(train(data, options(4, 10, 6, 2)), std::invalid_argument);
}

TEST_CASE("encoding") {
    auto data = walks(6, 40, 36);
    auto cb = train(data, options(3, 0, 8, 2));

    SUBCASE("argmin matches an unpruned scan") {
        auto queries = walks(7, 100, 36);
        for (const auto& q : queries) {
            auto code = encode(cb, q);
            auto parts = subspaces(cb, q);
            for (std::size_t m = 0; m < cb.segments(); ++m) {
                std::size_t best = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < cb.clusters; ++k) {
                    const double d = oracle::dtw_full_sq(parts[m].values(), cb.centroids[m][k].values(), 2);
                    if (d < best_d) {
                        best_d = d;
                        best = k;
                    }
                }
                CHECK(code.ids[m] == best);
            }
        }
    }
    SUBCASE("centroid compositions encode to themselves") {
        std::mt19937_64 rng(1);
        for (int trial = 0; trial < 50; ++trial) {
            PQCode code;
            for (std::size_t m = 0; m < cb.segments(); ++m) code.ids.push_back(static_cast<std::uint16_t>(rng() % cb.clusters));
            auto rec = reconstruct(cb, code);
            CHECK(rec.size() == 36);
            CHECK(encode(cb, rec) == code);
            auto table = asym_table(cb, rec);
            CHECK(asym_distance(table, code) == 0.0);
            for (std::size_t m = 0; m < cb.segments(); ++m) CHECK(table.at(m, code.ids[m]) == 0.0);
        }
    }
    SUBCASE("K = 1 gives the all-zero code") {
        auto one = train(data, options(3, 0, 1, 2));
        CHECK(encode(one, data[0]).ids == std::vector<std::uint16_t>{0, 0, 0});
    }
    CHECK_THROWS_AS(encode(cb, V(35, 0.0)), std::invalid_argument);
}

TEST_CASE("distances") {
    auto data = walks(8, 30, 40);
    auto cb = train(data, options(4, 3, 5, 2));
    auto codes = encode_all(cb, data);

    SUBCASE("lut arithmetic") {
        Codebook toy = cb;
        toy.segmentation.segments = 2;
        toy.centroids.resize(2);
        toy.envelopes.resize(2);
        toy.lut.assign(2 * toy.clusters * toy.clusters, 0.0);
        toy.lut[0 * toy.clusters * toy.clusters + 0 * toy.clusters + 1] = 9.0;
        toy.lut[1 * toy.clusters * toy.clusters + 2 * toy.clusters + 3] = 16.0;
        CHECK(sym_distance(toy, PQCode{{0, 2}}, PQCode{{1, 3}}) == 5.0);
        CHECK(sym_distance(toy, PQCode{{0, 2}}, PQCode{{0, 2}}) == 0.0);
        AsymmetricTable t{2, 2, {9.0, 1.0, 4.0, 16.0}};
        CHECK(asym_distance(t, PQCode{{0, 1}}) == 5.0);
        CHECK_THROWS_AS(asym_distance(t, PQCode{{0, 2}}), std::invalid_argument);
    }
    SUBCASE("plain symmetric distance is a pseudometric") {
        for (std::size_t i = 0; i < codes.size(); ++i) {
            CHECK(sym_distance(cb, codes[i], codes[i]) == 0.0);
            for (std::size_t j = 0; j < codes.size(); ++j) {
                CHECK(sym_distance(cb, codes[i], codes[j]) == sym_distance(cb, codes[j], codes[i]));
                CHECK(sym_distance(cb, codes[i], codes[j]) >= 0.0);
            }
        }
    }
    SUBCASE("asymmetric distance equals direct aggregation") {
        auto queries = walks(9, 20, 40);
        for (const auto& q : queries) {
            auto table = asym_table(cb, q);
            auto qp = subspaces(cb, q);
            for (const auto& code : codes) {
                double s = 0.0;
                for (std::size_t m = 0; m < cb.segments(); ++m) {
                    s += oracle::dtw_full_sq(qp[m].values(), cb.centroids[m][code.ids[m]].values(), 2);
                }
                CHECK(asym_distance(table, code) == doctest::Approx(std::sqrt(s)).epsilon(1e-12));
            }
        }
    }
    SUBCASE("lb_replace sits above the plain distance") {
        for (std::size_t i = 0; i < data.size(); ++i) {
            for (std::size_t j = 0; j < data.size(); ++j) {
                CHECK(sym_distance_lb(cb, codes[i], codes[j], data[i], data[j]) >=
                      sym_distance(cb, codes[i], codes[j]));
            }
        }
    }
    CHECK_THROWS_AS(sym_distance(cb, PQCode{{0, 0, 0}}, codes[0]), std::invalid_argument);
    CHECK_THROWS_AS(sym_distance(cb, PQCode{{0, 0, 0, 9}}, codes[0]), std::invalid_argument);
}

TEST_CASE("memory report") {
    auto r = memory_report(140, 7, 256, 1000);
    CHECK(r.compression_factor == 80.0);
    CHECK(r.code_bytes_per_series == 7);
    CHECK(r.total_code_bytes == 7000);
    CHECK(r.overhead_bits == 32ull * 256 * (3 * 140 + 256 * 7));
    CHECK(r.overhead_megabytes() == doctest::Approx(2.3).epsilon(0.05));
    CHECK(memory_report(140, 140, 256, 1).compression_factor == 4.0);
    CHECK(memory_report(140, 7, 1024, 1).code_bytes_per_series == 14);
    CHECK_THROWS_AS(memory_report(140, 0, 256, 1), std::invalid_argument);
}

TEST_CASE("codebook files") {
    auto data = walks(10, 20, 30);
    auto cb = train(data, options(3, 2, 4, 1));
    const auto dir = std::filesystem::temp_directory_path();

    SUBCASE("round trip is exact") {
        const auto path = dir / "pqdtw_cb_roundtrip.json";
        save_codebook(cb, path);
        auto back = load_codebook(path);
        std::filesystem::remove(path);
        CHECK(back == cb);

        auto unconstrained = train(data, options(3, 2, 4, std::nullopt));
        CHECK(codebook_from_json(codebook_to_json(unconstrained)) == unconstrained);
    }
    SUBCASE("asymmetric lut is rejected") {
        auto doc = codebook_to_json(cb);
        doc["lut"][0][0][1] = doc["lut"][0][0][1].get<double>() + 1.0;
        CHECK_THROWS_AS(codebook_from_json(doc), ParseError);
    }
    SUBCASE("unknown version is rejected") {
        auto doc = codebook_to_json(cb);
        doc["version"] = 2;
        CHECK_THROWS_AS(codebook_from_json(doc), ParseError);
    }
    SUBCASE("missing field is rejected") {
        auto doc = codebook_to_json(cb);
        doc.erase("centroids");
        CHECK_THROWS_AS(codebook_from_json(doc), ParseError);
    }
    SUBCASE("truncated file is rejected") {
        const auto path = dir / "pqdtw_cb_truncated.json";
        auto text = codebook_to_json(cb).dump();
        write_file(path, text.substr(0, text.size() / 2));
        CHECK_THROWS_AS(load_codebook(path), ParseError);
        std::filesystem::remove(path);
    }
    SUBCASE("codes round trip") {
        EncodedDataset enc{{"a", "b"}, {PQCode{{1, 2, 3}}, PQCode{{0, 0, 300}}}};
        auto back = parse_codes(format_codes(enc));
        CHECK(back.labels == enc.labels);
        CHECK(back.codes == enc.codes);
        CHECK_THROWS_AS(parse_codes("a,1,x\n"), ParseError);
        CHECK_THROWS_AS(parse_codes("a,1,2\nb,1\n"), ParseError);
        CHECK_THROWS_AS(parse_codes("a,70000\n"), ParseError);
    }
}
