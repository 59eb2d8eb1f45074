#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pqdtw/elastic.hpp"
#include "pqdtw/segmentation.hpp"
#include "pqdtw/series.hpp"

namespace pqdtw {

/// A series re-represented by one centroid id per subspace.
struct PQCode {
    std::vector<std::uint16_t> ids;

    std::size_t size() const noexcept { return ids.size(); }
    friend bool operator==(const PQCode&, const PQCode&) = default;
};

/// Per-subspace DBA centroids with their Keogh envelopes and the M x K x K
/// table of squared centroid-to-centroid DTW distances.
struct Codebook {
    static constexpr int kVersion = 1;

    std::size_t length = 0;          // D, raw series length
    std::size_t clusters = 0;        // K
    std::size_t segment_length = 0;  // l + t
    SegmentationParams segmentation;
    Window window;  // quantization window, in samples of a segment

    std::vector<std::vector<TimeSeries>> centroids;  // [M][K]
    std::vector<std::vector<Envelope>> envelopes;    // [M][K]
    std::vector<double> lut;                         // [M][K][K], squared DTW

    std::size_t segments() const noexcept { return segmentation.segments; }
    double lut_at(std::size_t m, std::size_t i, std::size_t j) const {
        return lut[(m * clusters + i) * clusters + j];
    }

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    friend bool operator==(const Codebook&, const Codebook&) = default;
};

struct TrainOptions {
    SegmentationParams segmentation;
    std::size_t clusters = 256;  // clamped to N when fewer series are given
    Window window;
    std::size_t max_iter = 30;
    std::size_t dba_iter = 10;
    std::uint64_t seed = 0;
};

/// Learns one DBA k-means sub-codebook per subspace and precomputes envelopes
/// and the centroid distance table.
Codebook train(std::span<const TimeSeries> data, const TrainOptions& options);

/// The pre-aligned, resampled subspaces of `s` as seen by `cb`.
std::vector<TimeSeries> subspaces(const Codebook& cb, std::span<const double> s);

PQCode encode(const Codebook& cb, std::span<const double> s);
PQCode encode_subspaces(const Codebook& cb, std::span<const TimeSeries> parts);
std::vector<PQCode> encode_all(const Codebook& cb, std::span<const TimeSeries> data);

/// Series made of the centroids named by `code`, concatenated in order.
TimeSeries reconstruct(const Codebook& cb, const PQCode& code);

/// sqrt(sum_m lut[m][a_m][b_m]).
double sym_distance(const Codebook& cb, const PQCode& a, const PQCode& b);

/// Symmetric distance where each subspace with a_m == b_m contributes
/// max(LB_Keogh(x^m, env(c)), LB_Keogh(y^m, env(c)))^2 instead of zero.
double sym_distance_lb(const Codebook& cb, const PQCode& a, const PQCode& b,
                       std::span<const TimeSeries> x_parts, std::span<const TimeSeries> y_parts);
double sym_distance_lb(const Codebook& cb, const PQCode& a, const PQCode& b,
                       std::span<const double> x, std::span<const double> y);

/// Squared DTW distances between every query subspace and every centroid.
struct AsymmetricTable {
    std::size_t segments = 0;
    std::size_t clusters = 0;
    std::vector<double> d2;  // [M][K]

    double at(std::size_t m, std::size_t k) const { return d2[m * clusters + k]; }
};

AsymmetricTable asym_table(const Codebook& cb, std::span<const double> query);
double asym_distance(const AsymmetricTable& table, const PQCode& code);

struct MemoryReport {
    double compression_factor = 0.0;  // 32D / (bits per code)
    std::size_t code_bytes_per_series = 0;
    std::size_t total_code_bytes = 0;
    std::uint64_t overhead_bits = 0;  // 32 K (3D + K M)
    double overhead_megabytes() const { return static_cast<double>(overhead_bits) / 8.0 / 1e6; }
};

MemoryReport memory_report(std::size_t length, std::size_t segments, std::size_t clusters,
                           std::size_t n_series);
MemoryReport memory_report(const Codebook& cb, std::size_t n_series);

}  // namespace pqdtw
