#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pqdtw/series.hpp"

namespace pqdtw {

/// MODWT scale coefficients: `levels` rows of D columns, row j-1 holding level j.
struct ScaleCoefficients {
    std::size_t levels = 0;
    std::size_t length = 0;
    std::vector<double> values;  // row-major

    std::span<const double> level(std::size_t j) const {
        return std::span<const double>(values).subspan((j - 1) * length, length);
    }
};

/// Haar MODWT scale coefficients with a periodic boundary. Level j is the
/// circular moving average of the last 2^j samples.
ScaleCoefficients modwt_scale(std::span<const double> s, std::size_t levels);

/// Indices i in [1, D-1] where sign(s_i - c_{J,i}) differs from the sign at
/// i-1. Zero differences carry the previous nonzero sign.
std::vector<std::size_t> segment_points(std::span<const double> s, const ScaleCoefficients& coeffs,
                                        std::size_t level);

/// Per-series cut points for a fixed number of segments.
struct SegmentPlan {
    std::vector<std::size_t> cuts;  // M-1 strictly increasing interior indices
    std::size_t segments = 0;       // M
    std::size_t base_length = 0;    // l = floor(D / M)
    std::size_t tail = 0;           // t
    std::size_t level = 0;          // J
    std::size_t length = 0;         // D

    std::size_t segment_begin(std::size_t m) const { return m == 0 ? 0 : cuts[m - 1]; }
    std::size_t segment_end(std::size_t m) const { return m + 1 == segments ? length : cuts[m]; }
};

/// Segmentation hyper-parameters shared by every series of a codebook.
struct SegmentationParams {
    std::size_t segments = 1;  // M
    std::size_t tail = 0;      // t
    std::size_t level = 3;     // J

    std::size_t base_length(std::size_t length) const { return length / segments; }
    /// Every extracted segment is resampled to l + t samples.
    std::size_t segment_length(std::size_t length) const { return base_length(length) + tail; }

    /// Throws std::invalid_argument if the parameters cannot segment series of `length`.
    void validate(std::size_t length) const;

    friend bool operator==(const SegmentationParams&, const SegmentationParams&) = default;
};

/// Replaces each fixed split m*l by the right-most MODWT segment point in
/// [m*l - t, m*l], if there is one. With t = 0 the wavelet step is skipped.
SegmentPlan plan_segments(std::span<const double> s, const SegmentationParams& params);

/// The cut rule alone, given precomputed (sorted) segment points.
SegmentPlan plan_from_points(std::span<const std::size_t> points, std::size_t length,
                             const SegmentationParams& params);

/// Cuts `s` per `plan` and resamples every piece to l + t samples.
std::vector<TimeSeries> extract_segments(std::span<const double> s, const SegmentPlan& plan);

/// plan_segments followed by extract_segments.
std::vector<TimeSeries> segment_series(std::span<const double> s, const SegmentationParams& params);

}  // namespace pqdtw
