#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "pqdtw/series.hpp"

namespace pqdtw {

/// Raised for strokes that cannot produce an angle series (no arc length).
class DegenerateStroke : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct StrokePoint {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;  // milliseconds
};

/// An ordered pen trajectory with non-decreasing timestamps.
struct Stroke {
    std::vector<StrokePoint> points;

    std::size_t size() const noexcept { return points.size(); }
    /// Throws std::invalid_argument on fewer than 2 points, non-finite
    /// coordinates or decreasing timestamps.
    void validate() const;
};

inline constexpr std::size_t kDefaultResamplePoints = 33;

/// Interior points become the mean of themselves and their two neighbours.
Stroke smooth(const Stroke& stroke);

/// R points spaced evenly along the polyline's arc length; endpoints kept.
Stroke redistribute(const Stroke& stroke, std::size_t points);

/// Direction to the next point, unwrapped so consecutive angles differ by at
/// most pi. Consecutive duplicate points are skipped.
std::vector<double> to_angles(const Stroke& stroke);

/// Concatenate strokes in drawing order, smooth, redistribute to R points and
/// convert to an angle series of length R - 1.
TimeSeries preprocess(std::span<const Stroke> strokes, std::size_t resample_points = kDefaultResamplePoints);

/// Stroke JSON: `[[{"x":..,"y":..,"t":..}, ...], ...]`.
std::vector<Stroke> strokes_from_json(const nlohmann::json& doc);
nlohmann::json strokes_to_json(std::span<const Stroke> strokes);

}  // namespace pqdtw
