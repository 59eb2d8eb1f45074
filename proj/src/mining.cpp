#include "pqdtw/mining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace pqdtw {

Measure parse_measure(std::string_view name, Window window) {
    if (name == "ed") return Measure::euclidean();
    if (name == "dtw") return Measure::dtw(window);
    if (name == "pq-sym") return Measure::pq_symmetric(false);
    if (name == "pq-sym-lb") return Measure::pq_symmetric(true);
    if (name == "pq-asym") return Measure::pq_asymmetric();
    throw std::invalid_argument("unknown measure '" + std::string(name) +
                                "' (expected ed, dtw, pq-sym, pq-sym-lb, pq-asym)");
}

std::string measure_name(const Measure& m) {
    switch (m.kind) {
        case MeasureKind::Euclidean: return "ed";
        case MeasureKind::Dtw: return "dtw";
        case MeasureKind::PqSymmetric: return m.lb_replace ? "pq-sym-lb" : "pq-sym";
        case MeasureKind::PqAsymmetric: return "pq-asym";
    }
    return "?";
}

ReferenceSet ReferenceSet::raw(const LabeledDataset& data) {
    ReferenceSet r;
    r.labels = data.labels();
    if (r.labels.empty()) r.labels.assign(data.size(), std::string());
    r.series = data.series();
    return r;
}

ReferenceSet ReferenceSet::encoded(const LabeledDataset& data, const Codebook& cb) {
    ReferenceSet r = raw(data);
    r.codebook = &cb;
    r.codes = encode_all(cb, r.series);
    return r;
}

bool ClassificationResult::contains_in_top(const std::string& label, std::size_t k) const {
    const std::size_t n = std::min(k, ranking.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (ranking[i].label == label) return true;
    }
    return false;
}

std::vector<double> distances_to_references(const ReferenceSet& refs, std::span<const double> query,
                                            const Measure& measure) {
    const std::size_t n = refs.size();
    std::vector<double> d(n);
    switch (measure.kind) {
        case MeasureKind::Euclidean:
        case MeasureKind::Dtw:
            if (refs.series.size() != n) {
                throw std::invalid_argument("reference set has no raw series for " + measure_name(measure));
            }
            for (std::size_t i = 0; i < n; ++i) {
                d[i] = measure.kind == MeasureKind::Euclidean ? euclidean(query, refs.series[i])
                                                              : dtw(query, refs.series[i], measure.window);
            }
            break;
        case MeasureKind::PqSymmetric: {
            if (!refs.codebook || refs.codes.size() != n) {
                throw std::invalid_argument("reference set is not encoded");
            }
            const PQCode q = encode(*refs.codebook, query);
            for (std::size_t i = 0; i < n; ++i) d[i] = sym_distance(*refs.codebook, q, refs.codes[i]);
            break;
        }
        case MeasureKind::PqAsymmetric: {
            if (!refs.codebook || refs.codes.size() != n) {
                throw std::invalid_argument("reference set is not encoded");
            }
            // Built once per query; each reference then costs M lookups.
            const auto table = asym_table(*refs.codebook, query);
            for (std::size_t i = 0; i < n; ++i) d[i] = asym_distance(table, refs.codes[i]);
            break;
        }
    }
    return d;
}

ClassificationResult knn_classify(const ReferenceSet& refs, std::span<const double> query,
                                  std::size_t k, const Measure& measure) {
    if (refs.size() == 0) throw std::invalid_argument("knn_classify: empty reference set");
    if (k == 0 || k > refs.size()) {
        throw std::invalid_argument("knn_classify: k=" + std::to_string(k) + " must be in [1, " +
                                    std::to_string(refs.size()) + "]");
    }
    const auto d = distances_to_references(refs, query, measure);
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    ClassificationResult result;
    std::unordered_set<std::string> seen;
    for (auto i : order) {
        if (!seen.insert(refs.labels[i]).second) continue;
        result.ranking.push_back({refs.labels[i], d[i]});
        if (result.ranking.size() == k) break;
    }
    return result;
}

DistanceMatrix pairwise_matrix(const Codebook& cb, std::span<const PQCode> codes) {
    DistanceMatrix out(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) {
        for (std::size_t j = i + 1; j < codes.size(); ++j) {
            out.set_symmetric(i, j, sym_distance(cb, codes[i], codes[j]));
        }
    }
    return out;
}

DistanceMatrix pairwise_matrix(std::span<const TimeSeries> data, const Measure& measure,
                               const Codebook* cb) {
    const std::size_t n = data.size();
    if (n < 2) throw std::invalid_argument("pairwise_matrix: need at least 2 series");
    if (measure.uses_codebook() && !cb) {
        throw std::invalid_argument("pairwise_matrix: " + measure_name(measure) + " needs a codebook");
    }
    DistanceMatrix out(n);
    switch (measure.kind) {
        case MeasureKind::Euclidean:
        case MeasureKind::Dtw:
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    out.set_symmetric(i, j,
                                      measure.kind == MeasureKind::Euclidean
                                          ? euclidean(data[i], data[j])
                                          : dtw(data[i], data[j], measure.window));
                }
            }
            break;
        case MeasureKind::PqSymmetric: {
            std::vector<std::vector<TimeSeries>> parts;
            std::vector<PQCode> codes;
            parts.reserve(n);
            codes.reserve(n);
            for (const auto& s : data) {
                parts.push_back(subspaces(*cb, s));
                codes.push_back(encode_subspaces(*cb, parts.back()));
            }
            if (!measure.lb_replace) return pairwise_matrix(*cb, codes);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    out.set_symmetric(i, j, sym_distance_lb(*cb, codes[i], codes[j], parts[i], parts[j]));
                }
            }
            break;
        }
        case MeasureKind::PqAsymmetric: {
            // Row i uses the raw series i against the codes of j > i.
            const auto codes = encode_all(*cb, data);
            for (std::size_t i = 0; i < n; ++i) {
                const auto table = asym_table(*cb, data[i]);
                for (std::size_t j = i + 1; j < n; ++j) out.set_symmetric(i, j, asym_distance(table, codes[j]));
            }
            break;
        }
    }
    return out;
}

Linkage parse_linkage(std::string_view name) {
    if (name == "single") return Linkage::Single;
    if (name == "average") return Linkage::Average;
    if (name == "complete") return Linkage::Complete;
    throw std::invalid_argument("unknown linkage '" + std::string(name) +
                                "' (expected single, average, complete)");
}

namespace {

std::pair<std::size_t, std::size_t> ordered(std::size_t a, std::size_t b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

Dendrogram agglomerative(const DistanceMatrix& matrix, Linkage linkage) {
    const std::size_t n = matrix.size();
    if (n < 2) throw std::invalid_argument("agglomerative: need at least 2 points");

    std::vector<double> d(matrix.values().begin(), matrix.values().end());
    auto at = [&](std::size_t i, std::size_t j) -> double& { return d[i * n + j]; };
    std::vector<std::size_t> id(n), size(n, 1);
    std::iota(id.begin(), id.end(), 0);
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), 0);

    Dendrogram dend{n, {}};
    dend.merges.reserve(n - 1);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t bi = 0, bj = 0;
        double best = std::numeric_limits<double>::infinity();
        std::pair<std::size_t, std::size_t> best_ids{n * 2, n * 2};
        bool found = false;
        for (std::size_t x = 0; x < active.size(); ++x) {
            const std::size_t i = active[x];
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                const std::size_t j = active[y];
                const double v = at(i, j);
                if (!found || v < best ||
                    (v == best && ordered(id[i], id[j]) < best_ids)) {
                    found = true;
                    best = v;
                    best_ids = ordered(id[i], id[j]);
                    bi = i;
                    bj = j;
                }
            }
        }

        const std::size_t na = size[bi], nb = size[bj];
        for (std::size_t k : active) {
            if (k == bi || k == bj) continue;
            const double dik = at(bi, k), djk = at(bj, k);
            double v = 0.0;
            switch (linkage) {
                case Linkage::Single: v = std::min(dik, djk); break;
                case Linkage::Complete: v = std::max(dik, djk); break;
                case Linkage::Average:
                    v = (static_cast<double>(na) * dik + static_cast<double>(nb) * djk) /
                        static_cast<double>(na + nb);
                    break;
            }
            at(bi, k) = v;
            at(k, bi) = v;
        }
        dend.merges.push_back({best_ids.first, best_ids.second, best, na + nb});
        id[bi] = n + step;
        size[bi] = na + nb;
        active.erase(std::find(active.begin(), active.end(), bj));
    }
    return dend;
}

std::vector<std::size_t> cut_k(const Dendrogram& dendrogram, std::size_t k) {
    const std::size_t n = dendrogram.leaves;
    if (k < 1 || k > n) {
        throw std::invalid_argument("cut_k: k=" + std::to_string(k) + " must be in [1, " +
                                    std::to_string(n) + "]");
    }
    // Union-find over cluster ids 0..2N-2; merge s creates id N+s.
    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    const std::size_t applied = n - k;
    for (std::size_t s = 0; s < applied; ++s) {
        const auto& m = dendrogram.merges[s];
        parent[find(m.a)] = n + s;
        parent[find(m.b)] = n + s;
    }
    std::vector<std::size_t> labels(n);
    std::unordered_map<std::size_t, std::size_t> dense;
    for (std::size_t i = 0; i < n; ++i) {
        const auto root = find(i);
        auto [it, inserted] = dense.try_emplace(root, dense.size());
        labels[i] = it->second;
    }
    return labels;
}

namespace {

struct PairCounts {
    double sum_cells = 0.0;  // sum over contingency cells of C(n_ij, 2)
    double sum_rows = 0.0;   // sum over pred clusters of C(a_i, 2)
    double sum_cols = 0.0;   // sum over truth clusters of C(b_j, 2)
    double total = 0.0;      // C(n, 2)
};

double choose2(double x) { return x * (x - 1.0) / 2.0; }

PairCounts pair_counts(std::span<const std::size_t> pred, std::span<const std::size_t> truth) {
    if (pred.size() != truth.size()) {
        throw std::invalid_argument("rand index: label sequences differ in length (" +
                                    std::to_string(pred.size()) + " vs " + std::to_string(truth.size()) + ")");
    }
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> cells;
    std::map<std::size_t, std::size_t> rows, cols;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        ++cells[{pred[i], truth[i]}];
        ++rows[pred[i]];
        ++cols[truth[i]];
    }
    PairCounts c;
    for (const auto& [key, v] : cells) c.sum_cells += choose2(static_cast<double>(v));
    for (const auto& [key, v] : rows) c.sum_rows += choose2(static_cast<double>(v));
    for (const auto& [key, v] : cols) c.sum_cols += choose2(static_cast<double>(v));
    c.total = choose2(static_cast<double>(pred.size()));
    return c;
}

}  // namespace

double rand_index(std::span<const std::size_t> pred, std::span<const std::size_t> truth) {
    const auto c = pair_counts(pred, truth);
    if (c.total == 0.0) return 1.0;
    // agreements = pairs together in both + pairs apart in both
    const double together = c.sum_cells;
    const double apart = c.total - c.sum_rows - c.sum_cols + c.sum_cells;
    return (together + apart) / c.total;
}

double adjusted_rand_index(std::span<const std::size_t> pred, std::span<const std::size_t> truth) {
    const auto c = pair_counts(pred, truth);
    if (c.total == 0.0) return 1.0;
    const double expected = c.sum_rows * c.sum_cols / c.total;
    const double max_index = 0.5 * (c.sum_rows + c.sum_cols);
    if (max_index == expected) return 1.0;  // both partitions trivial and identical in shape
    return (c.sum_cells - expected) / (max_index - expected);
}

std::vector<std::size_t> label_ids(std::span<const std::string> labels) {
    std::unordered_map<std::string, std::size_t> ids;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(ids.try_emplace(l, ids.size()).first->second);
    return out;
}

}  // namespace pqdtw
