#include "pqdtw/segmentation.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <string>

namespace pqdtw {

ScaleCoefficients modwt_scale(std::span<const double> s, std::size_t levels) {
    const std::size_t n = s.size();
    if (levels < 1) throw std::invalid_argument("modwt_scale: level must be >= 1");
    if (levels >= 8 * sizeof(std::size_t) || (std::size_t{1} << levels) > n) {
        throw std::invalid_argument("modwt_scale: 2^" + std::to_string(levels) +
                                    " exceeds series length " + std::to_string(n));
    }
    ScaleCoefficients out{levels, n, std::vector<double>(levels * n)};
    std::span<const double> below = s;
    for (std::size_t j = 1; j <= levels; ++j) {
        const std::size_t stride = std::size_t{1} << (j - 1);
        double* row = out.values.data() + (j - 1) * n;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t back = (i + n - stride % n) % n;
            row[i] = 0.5 * (below[i] + below[back]);
        }
        below = out.level(j);
    }
    return out;
}

std::vector<std::size_t> segment_points(std::span<const double> s, const ScaleCoefficients& coeffs,
                                        std::size_t level) {
    if (level < 1 || level > coeffs.levels) {
        throw std::invalid_argument("segment_points: level " + std::to_string(level) +
                                    " not available");
    }
    if (coeffs.length != s.size()) {
        throw std::invalid_argument("segment_points: coefficient length mismatch");
    }
    const auto c = coeffs.level(level);
    std::vector<std::size_t> points;
    int prev_sign = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = s[i] - c[i];
        int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (sign == 0) sign = prev_sign;
        if (i > 0 && prev_sign != 0 && sign != prev_sign) points.push_back(i);
        prev_sign = sign;
    }
    return points;
}

void SegmentationParams::validate(std::size_t length) const {
    if (segments < 1) throw std::invalid_argument("segment count must be >= 1");
    const std::size_t l = length / segments;
    if (l < 2) {
        throw std::invalid_argument("segment count " + std::to_string(segments) +
                                    " leaves fewer than 2 samples per segment for length " +
                                    std::to_string(length));
    }
    if (tail >= l) {
        throw std::invalid_argument("tail " + std::to_string(tail) +
                                    " must be smaller than the base segment length " +
                                    std::to_string(l));
    }
    if (tail > 0 && segments > 1) {
        if (level < 1 || level >= 8 * sizeof(std::size_t) || (std::size_t{1} << level) > length) {
            throw std::invalid_argument("wavelet level " + std::to_string(level) +
                                        " needs 2^J <= series length " + std::to_string(length));
        }
    }
}

SegmentPlan plan_from_points(std::span<const std::size_t> points, std::size_t length,
                             const SegmentationParams& params) {
    params.validate(length);
    SegmentPlan plan;
    plan.segments = params.segments;
    plan.base_length = length / params.segments;
    plan.tail = params.tail;
    plan.level = params.level;
    plan.length = length;

    const std::size_t l = plan.base_length;
    plan.cuts.reserve(params.segments - 1);
    for (std::size_t m = 1; m < params.segments; ++m) {
        const std::size_t fixed = m * l;
        const std::size_t window_lo = fixed - params.tail;
        std::size_t cut = fixed;
        // Right-most point <= fixed, if it lies inside the tail window.
        auto it = std::upper_bound(points.begin(), points.end(), fixed);
        if (it != points.begin() && *std::prev(it) >= window_lo) cut = *std::prev(it);
        plan.cuts.push_back(cut);
    }
    return plan;
}

SegmentPlan plan_segments(std::span<const double> s, const SegmentationParams& params) {
    params.validate(s.size());
    std::vector<std::size_t> points;
    if (params.tail > 0 && params.segments > 1) {
        points = segment_points(s, modwt_scale(s, params.level), params.level);
    }
    return plan_from_points(points, s.size(), params);
}

std::vector<TimeSeries> extract_segments(std::span<const double> s, const SegmentPlan& plan) {
    if (plan.length != s.size() || plan.cuts.size() + 1 != plan.segments) {
        throw std::invalid_argument("extract_segments: plan does not match series");
    }
    const std::size_t target = plan.base_length + plan.tail;
    std::vector<TimeSeries> out;
    out.reserve(plan.segments);
    for (std::size_t m = 0; m < plan.segments; ++m) {
        const std::size_t b = plan.segment_begin(m);
        const std::size_t e = plan.segment_end(m);
        if (e < b + 2) {
            throw std::invalid_argument("extract_segments: segment " + std::to_string(m) +
                                        " has fewer than 2 samples");
        }
        out.push_back(resample_linear(s.subspan(b, e - b), target));
    }
    return out;
}

std::vector<TimeSeries> segment_series(std::span<const double> s, const SegmentationParams& params) {
    return extract_segments(s, plan_segments(s, params));
}

}  // namespace pqdtw
