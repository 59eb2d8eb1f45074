#include "pqdtw/elastic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>
#include <utility>

namespace pqdtw {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(a) +
                                    " vs " + std::to_string(b) + ")");
    }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Range {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

}  // namespace

Window Window::from_percent(double percent, std::size_t length) {
    if (!(percent >= 0.0)) throw std::invalid_argument("window percent must be >= 0");
    // 5% of 140 evaluates to 7.000000000000001 in binary floating point.
    const double raw = percent / 100.0 * static_cast<double>(length);
    const double r = std::ceil(raw - 1e-9);
    return Window(static_cast<std::size_t>(std::max(0.0, r)));
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
    require_same_length(a.size(), b.size(), "euclidean");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_euclidean(a, b));
}

double dtw_squared(std::span<const double> a, std::span<const double> b, Window window,
                   double upper_bound_sq) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n < 1 || m < 1) throw std::invalid_argument("dtw: empty series");
    const std::size_t r = window.effective(std::max(n, m));
    const std::size_t gap = n > m ? n - m : m - n;
    if (gap > r) {
        throw std::invalid_argument("dtw: band radius " + std::to_string(r) +
                                    " admits no warping path for lengths " + std::to_string(n) +
                                    " and " + std::to_string(m));
    }

    // Rows are 1-based over `a`, columns 1-based over `b`; column 0 is the
    // boundary. Cells outside a buffer's written range are always +inf.
    std::vector<double> prev(m + 1, kInf);
    std::vector<double> curr(m + 1, kInf);
    prev[0] = 0.0;
    Range prev_written{0, 0}, curr_written{0, 0};
    std::size_t prev_first = 0, prev_last = 0;

    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t lo = i > r ? i - r : 1;
        const std::size_t hi = std::min(m, i + r);

        std::fill(curr.begin() + static_cast<std::ptrdiff_t>(curr_written.lo),
                  curr.begin() + static_cast<std::ptrdiff_t>(curr_written.hi) + 1, kInf);

        // Cells left of prev_first can only be reached through cells that
        // already exceed the bound.
        const std::size_t start = std::max(lo, prev_first);
        if (start > hi) return kPruned;

        const double ai = a[i - 1];
        std::size_t first = 0, last = 0;
        bool any = false;
        std::size_t j = start;
        double left = curr[start - 1];
        for (; j <= hi; ++j) {
            const double d = ai - b[j - 1];
            const double v = d * d + std::min(std::min(prev[j - 1], prev[j]), left);
            curr[j] = v;
            left = v;
            if (v <= upper_bound_sq) {
                if (!any) first = j;
                any = true;
                last = j;
            } else if (j > prev_last) {
                // Past the previous row's last live cell, the rest of the row
                // only extends this (already too expensive) cell.
                ++j;
                break;
            }
        }
        if (!any) return kPruned;

        curr_written = {start, j - 1};
        std::swap(prev, curr);
        std::swap(prev_written, curr_written);
        prev_first = first;
        prev_last = last;
    }
    const double result = prev[m];
    return result <= upper_bound_sq ? result : kPruned;
}

double dtw(std::span<const double> a, std::span<const double> b, Window window,
           double upper_bound) {
    const double ub_sq = std::isinf(upper_bound) ? kInf : upper_bound * upper_bound;
    const double d2 = dtw_squared(a, b, window, ub_sq);
    if (std::isinf(d2)) return kPruned;
    const double d = std::sqrt(d2);
    return d <= upper_bound ? d : kPruned;
}

Envelope keogh_envelope(std::span<const double> s, Window window) {
    const std::size_t n = s.size();
    const std::size_t r = window.effective(n);
    Envelope env{std::vector<double>(n), std::vector<double>(n), window};

    // Monotonic deques over the window [i - r, i + r].
    std::deque<std::size_t> maxq, minq;
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t right = std::min(n - 1, i + r);
        for (; next <= right; ++next) {
            while (!maxq.empty() && s[maxq.back()] <= s[next]) maxq.pop_back();
            maxq.push_back(next);
            while (!minq.empty() && s[minq.back()] >= s[next]) minq.pop_back();
            minq.push_back(next);
        }
        const std::size_t left = i > r ? i - r : 0;
        while (maxq.front() < left) maxq.pop_front();
        while (minq.front() < left) minq.pop_front();
        env.upper[i] = s[maxq.front()];
        env.lower[i] = s[minq.front()];
    }
    return env;
}

double lb_keogh_squared(std::span<const double> query, const Envelope& env,
                        double abandon_above_sq) {
    require_same_length(query.size(), env.size(), "lb_keogh");
    double sum = 0.0;
    for (std::size_t i = 0; i < query.size(); ++i) {
        const double q = query[i];
        if (q > env.upper[i]) {
            const double d = q - env.upper[i];
            sum += d * d;
        } else if (q < env.lower[i]) {
            const double d = env.lower[i] - q;
            sum += d * d;
        }
        if (sum > abandon_above_sq) return sum;
    }
    return sum;
}

double lb_keogh(std::span<const double> query, const Envelope& env) {
    return std::sqrt(lb_keogh_squared(query, env));
}

double lb_kim_squared(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("lb_kim: empty series");
    const double f = a.front() - b.front();
    const double l = a.back() - b.back();
    // A single-sample series aligns its only point with both ends.
    if (a.size() == 1 && b.size() == 1) return f * f;
    return f * f + l * l;
}

double lb_kim(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(lb_kim_squared(a, b));
}

Neighbor nn_search_cascaded(std::span<const double> query, std::span<const TimeSeries> candidates,
                            std::span<const Envelope> envelopes, Window window,
                            CascadeStats* stats) {
    if (candidates.empty()) throw std::invalid_argument("nn_search_cascaded: no candidates");
    require_same_length(candidates.size(), envelopes.size(), "nn_search_cascaded envelopes");
    const std::size_t n = query.size();
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        require_same_length(n, candidates[k].size(), "nn_search_cascaded candidate");
        require_same_length(n, envelopes[k].size(), "nn_search_cascaded envelope");
        if (envelopes[k].window.effective(n) < window.effective(n)) {
            throw std::invalid_argument(
                "nn_search_cascaded: envelope radius is narrower than the search window");
        }
    }

    CascadeStats local;
    double best_sq = kInf;
    std::size_t best = 0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const auto cand = candidates[k].span();
        if (lb_kim_squared(query, cand) > best_sq) {
            ++local.pruned_by_kim;
            continue;
        }
        if (lb_keogh_squared(query, envelopes[k], best_sq) > best_sq) {
            ++local.pruned_by_keogh;
            continue;
        }
        ++local.dtw_computed;
        const double d2 = dtw_squared(query, cand, window, best_sq);
        if (d2 < best_sq) {
            best_sq = d2;
            best = k;
        } else if (std::isinf(d2)) {
            ++local.dtw_abandoned;
        }
    }
    if (stats) *stats = local;
    return {best, std::sqrt(best_sq)};
}

}  // namespace pqdtw
