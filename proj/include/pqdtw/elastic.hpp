#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "pqdtw/series.hpp"

namespace pqdtw {

/// Sakoe-Chiba band half-width in samples, or unconstrained.
class Window {
public:
    constexpr Window() = default;
    constexpr explicit Window(std::size_t radius) : radius_(radius) {}

    static constexpr Window unconstrained() { return Window(); }
    /// Radius ceil(percent/100 * length), e.g. cDTW5 on length 140 gives r = 7.
    static Window from_percent(double percent, std::size_t length);

    bool constrained() const noexcept { return radius_.has_value(); }
    std::optional<std::size_t> radius() const noexcept { return radius_; }

    /// min(r, n - 1) for a comparison of length-n series.
    std::size_t effective(std::size_t n) const noexcept {
        const std::size_t full = n == 0 ? 0 : n - 1;
        return radius_ ? std::min(*radius_, full) : full;
    }

    friend bool operator==(const Window&, const Window&) = default;

private:
    std::optional<std::size_t> radius_;
};

/// Keogh envelope: running max/min of the source over +/- radius samples.
struct Envelope {
    std::vector<double> upper;
    std::vector<double> lower;
    Window window;

    std::size_t size() const noexcept { return upper.size(); }
    friend bool operator==(const Envelope&, const Envelope&) = default;
};

/// Returned by dtw() when the upper bound proves the distance exceeds it.
inline constexpr double kPruned = std::numeric_limits<double>::infinity();

double euclidean(std::span<const double> a, std::span<const double> b);

/// Squared Euclidean distance, without the final square root.
double squared_euclidean(std::span<const double> a, std::span<const double> b);

/// DTW distance: the square root of the minimum accumulated squared pointwise
/// cost over monotone, continuous warping paths inside the Sakoe-Chiba band.
///
/// With an `upper_bound`, rows are narrowed to cells whose accumulated cost can
/// still finish under the bound (PrunedDTW). Any result <= upper_bound is exact;
/// otherwise kPruned is returned.
double dtw(std::span<const double> a, std::span<const double> b,
           Window window = Window::unconstrained(),
           double upper_bound = std::numeric_limits<double>::infinity());

/// Squared variant of dtw(); `upper_bound_sq` is compared to the squared cost.
double dtw_squared(std::span<const double> a, std::span<const double> b, Window window,
                   double upper_bound_sq = std::numeric_limits<double>::infinity());

Envelope keogh_envelope(std::span<const double> s, Window window);

double lb_keogh(std::span<const double> query, const Envelope& env);
double lb_keogh_squared(std::span<const double> query, const Envelope& env,
                        double abandon_above_sq = std::numeric_limits<double>::infinity());

/// First/last point bound. Endpoints are aligned by every warping path.
double lb_kim(std::span<const double> a, std::span<const double> b);
double lb_kim_squared(std::span<const double> a, std::span<const double> b);

struct Neighbor {
    std::size_t index = 0;
    double distance = 0.0;
};

/// Counters for how many candidates each stage of the cascade disposed of.
struct CascadeStats {
    std::size_t pruned_by_kim = 0;
    std::size_t pruned_by_keogh = 0;
    std::size_t dtw_computed = 0;
    std::size_t dtw_abandoned = 0;
};

/// Exact windowed-DTW nearest neighbour among `candidates`, using
/// LB_Kim -> LB_Keogh (query against candidate envelopes) -> PrunedDTW.
/// Ties resolve to the lowest index; the result equals an unpruned scan.
Neighbor nn_search_cascaded(std::span<const double> query,
                            std::span<const TimeSeries> candidates,
                            std::span<const Envelope> envelopes, Window window,
                            CascadeStats* stats = nullptr);

}  // namespace pqdtw
