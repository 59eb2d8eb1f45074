#include "pqdtw/dba.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace pqdtw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// std::uniform_real_distribution is implementation-defined; this is not.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Assignment {
    std::vector<std::size_t> cluster;
    std::vector<double> dist_sq;
    double inertia = 0.0;
};

Assignment assign(std::span<const TimeSeries> data, std::span<const TimeSeries> centroids,
                  Window window) {
    std::vector<Envelope> envelopes;
    envelopes.reserve(centroids.size());
    for (const auto& c : centroids) envelopes.push_back(keogh_envelope(c, window));

    Assignment a;
    a.cluster.resize(data.size());
    a.dist_sq.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto nn = nn_search_cascaded(data[i], centroids, envelopes, window);
        a.cluster[i] = nn.index;
        a.dist_sq[i] = nn.distance * nn.distance;
        a.inertia += a.dist_sq[i];
    }
    return a;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> dtw_path(std::span<const double> a,
                                                          std::span<const double> b,
                                                          Window window) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n == 0 || m == 0) throw std::invalid_argument("dtw_path: empty series");
    const std::size_t r = window.effective(std::max(n, m));
    if ((n > m ? n - m : m - n) > r) {
        throw std::invalid_argument("dtw_path: band admits no warping path");
    }

    const std::size_t cols = m + 1;
    std::vector<double> cost((n + 1) * cols, kInf);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return cost[i * cols + j]; };
    at(0, 0) = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t lo = i > r ? i - r : 1;
        const std::size_t hi = std::min(m, i + r);
        for (std::size_t j = lo; j <= hi; ++j) {
            const double d = a[i - 1] - b[j - 1];
            at(i, j) = d * d + std::min({at(i - 1, j - 1), at(i, j - 1), at(i - 1, j)});
        }
    }

    std::vector<std::pair<std::size_t, std::size_t>> path;
    path.reserve(n + m);
    std::size_t i = n, j = m;
    path.emplace_back(i - 1, j - 1);
    while (i > 1 || j > 1) {
        if (i == 1) {
            --j;
        } else if (j == 1) {
            --i;
        } else {
            const double diag = at(i - 1, j - 1);
            const double left = at(i, j - 1);
            const double up = at(i - 1, j);
            if (diag <= left && diag <= up) {
                --i;
                --j;
            } else if (left <= up) {
                --j;
            } else {
                --i;
            }
        }
        path.emplace_back(i - 1, j - 1);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

TimeSeries dba_barycenter(std::span<const TimeSeries> members, const TimeSeries& init,
                          Window window, std::size_t max_iter) {
    if (members.empty()) throw std::invalid_argument("dba_barycenter: no members");
    for (const auto& m : members) {
        if (m.size() != init.size()) {
            throw std::invalid_argument("dba_barycenter: member length " + std::to_string(m.size()) +
                                        " differs from average length " +
                                        std::to_string(init.size()));
        }
    }

    std::vector<double> average = init.values();
    std::vector<double> sums(average.size());
    std::vector<std::size_t> counts(average.size());
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (const auto& member : members) {
            for (auto [ai, mj] : dtw_path(average, member, window)) {
                sums[ai] += member[mj];
                ++counts[ai];
            }
        }
        double change = 0.0;
        for (std::size_t i = 0; i < average.size(); ++i) {
            const double next = sums[i] / static_cast<double>(counts[i]);
            change = std::max(change, std::abs(next - average[i]));
            average[i] = next;
        }
        if (change < 1e-9) break;
    }
    return TimeSeries(std::move(average));
}

std::vector<std::size_t> kmeanspp_seeds(std::span<const TimeSeries> data, std::size_t k,
                                        Window window, std::uint64_t seed) {
    if (k < 1 || k > data.size()) {
        throw std::invalid_argument("k-means: need 1 <= K <= N, got K=" + std::to_string(k) +
                                    ", N=" + std::to_string(data.size()));
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> seeds;
    seeds.reserve(k);
    std::vector<bool> chosen(data.size(), false);

    const auto first = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(data.size()));
    seeds.push_back(std::min(first, data.size() - 1));
    chosen[seeds.back()] = true;

    std::vector<double> nearest(data.size(), kInf);
    while (seeds.size() < k) {
        const auto& c = data[seeds.back()];
        double total = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (!chosen[i]) nearest[i] = std::min(nearest[i], dtw_squared(data[i], c, window, nearest[i]));
            else nearest[i] = 0.0;
            total += nearest[i];
        }
        std::size_t pick = data.size();
        if (total > 0.0) {
            double target = uniform01(rng) * total;
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (chosen[i] || nearest[i] <= 0.0) continue;
                pick = i;
                target -= nearest[i];
                if (target < 0.0) break;
            }
        }
        if (pick == data.size()) {
            // Every remaining point duplicates a seed.
            pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) -
                                            chosen.begin());
        }
        seeds.push_back(pick);
        chosen[pick] = true;
    }
    return seeds;
}

ClusterModel dba_kmeans(std::span<const TimeSeries> data, const KMeansOptions& options) {
    const std::size_t k = options.clusters;
    if (data.size() < k || k < 1) {
        throw std::invalid_argument("dba_kmeans: need 1 <= K <= N, got K=" + std::to_string(k) +
                                    ", N=" + std::to_string(data.size()));
    }
    for (const auto& s : data) {
        if (s.size() != data[0].size()) throw std::invalid_argument("dba_kmeans: ragged input");
    }

    ClusterModel model;
    for (auto idx : kmeanspp_seeds(data, k, options.window, options.seed)) {
        model.centroids.push_back(data[idx]);
    }
    Assignment current = assign(data, model.centroids, options.window);
    model.inertia_history.push_back(current.inertia);

    std::vector<TimeSeries> members;
    for (std::size_t it = 0; it < options.max_iter; ++it) {
        // Re-seed empty clusters with the worst-fitting point of a shared cluster.
        std::vector<std::size_t> sizes(k, 0);
        for (auto c : current.cluster) ++sizes[c];
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            std::size_t worst = data.size();
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (sizes[current.cluster[i]] < 2) continue;
                if (worst == data.size() || current.dist_sq[i] > current.dist_sq[worst]) worst = i;
            }
            if (worst == data.size()) break;
            --sizes[current.cluster[worst]];
            ++sizes[c];
            model.centroids[c] = data[worst];
            current.inertia -= current.dist_sq[worst];
            current.cluster[worst] = c;
            current.dist_sq[worst] = 0.0;
        }

        for (std::size_t c = 0; c < k; ++c) {
            members.clear();
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (current.cluster[i] == c) members.push_back(data[i]);
            }
            if (members.empty()) continue;
            model.centroids[c] =
                dba_barycenter(members, model.centroids[c], options.window, options.dba_iter);
        }

        Assignment next = assign(data, model.centroids, options.window);
        model.inertia_history.push_back(next.inertia);
        model.iterations = it + 1;
        const bool converged = next.cluster == current.cluster;
        current = std::move(next);
        if (converged) break;
    }

    model.assignments = std::move(current.cluster);
    model.inertia = current.inertia;
    return model;
}

}  // namespace pqdtw
