#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pqdtw/elastic.hpp"
#include "pqdtw/series.hpp"

namespace pqdtw {

/// Optimal warping path between `a` and `b` as (index in a, index in b) pairs
/// from (0, 0) to (|a|-1, |b|-1). Ties in the traceback prefer the diagonal
/// step, then the step along `b`, then the step along `a`.
std::vector<std::pair<std::size_t, std::size_t>> dtw_path(std::span<const double> a,
                                                          std::span<const double> b, Window window);

/// DTW Barycenter Averaging starting from `init`. Stops after `max_iter`
/// updates or once the average moves by less than 1e-9 (max-norm).
TimeSeries dba_barycenter(std::span<const TimeSeries> members, const TimeSeries& init,
                          Window window, std::size_t max_iter = 10);

struct KMeansOptions {
    std::size_t clusters = 1;  // K
    Window window;
    std::size_t max_iter = 30;
    std::size_t dba_iter = 10;
    std::uint64_t seed = 0;
};

struct ClusterModel {
    std::vector<TimeSeries> centroids;
    std::vector<std::size_t> assignments;
    double inertia = 0.0;                 // sum of squared DTW distances to assigned centroids
    std::vector<double> inertia_history;  // after each assignment step
    std::size_t iterations = 0;
};

/// k-means++ seeding under squared DTW; returns indices into `data`.
std::vector<std::size_t> kmeanspp_seeds(std::span<const TimeSeries> data, std::size_t k,
                                        Window window, std::uint64_t seed);

/// Lloyd iterations with DTW assignment and DBA centroid updates.
ClusterModel dba_kmeans(std::span<const TimeSeries> data, const KMeansOptions& options);

}  // namespace pqdtw
