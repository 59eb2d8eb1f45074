#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqdtw/elastic.hpp"
#include "pqdtw/pq.hpp"
#include "pqdtw/series.hpp"

namespace pqdtw {

enum class MeasureKind { Euclidean, Dtw, PqSymmetric, PqAsymmetric };

struct Measure {
    MeasureKind kind = MeasureKind::Dtw;
    Window window;            // for Dtw
    bool lb_replace = false;  // for PqSymmetric in pairwise matrices

    static Measure euclidean() { return {MeasureKind::Euclidean, {}, false}; }
    static Measure dtw(Window w = Window::unconstrained()) { return {MeasureKind::Dtw, w, false}; }
    static Measure pq_symmetric(bool lb = false) { return {MeasureKind::PqSymmetric, {}, lb}; }
    static Measure pq_asymmetric() { return {MeasureKind::PqAsymmetric, {}, false}; }

    bool uses_codebook() const noexcept {
        return kind == MeasureKind::PqSymmetric || kind == MeasureKind::PqAsymmetric;
    }
};

/// Parses "ed", "dtw", "pq-sym", "pq-sym-lb", "pq-asym".
Measure parse_measure(std::string_view name, Window window = Window::unconstrained());
std::string measure_name(const Measure& m);

/// Labeled reference data for nearest-neighbour queries. Raw series are
/// needed for ED/DTW; codes (with their codebook) for the PQ measures.
struct ReferenceSet {
    std::vector<std::string> labels;
    std::vector<TimeSeries> series;
    const Codebook* codebook = nullptr;
    std::vector<PQCode> codes;

    std::size_t size() const noexcept { return labels.size(); }

    static ReferenceSet raw(const LabeledDataset& data);
    /// Encodes `data` with `cb`; the raw series are kept as well.
    static ReferenceSet encoded(const LabeledDataset& data, const Codebook& cb);
};

struct RankedLabel {
    std::string label;
    double distance = 0.0;
};

/// Distinct labels ordered by their nearest reference, ascending.
struct ClassificationResult {
    std::vector<RankedLabel> ranking;

    /// True if `label` is among the first `k` ranked labels.
    bool contains_in_top(const std::string& label, std::size_t k) const;
};

/// Distance from `query` to every reference under `measure`.
std::vector<double> distances_to_references(const ReferenceSet& refs, std::span<const double> query,
                                            const Measure& measure);

/// Top-k distinct labels by nearest-reference distance; ties go to the lower
/// reference index. Throws std::invalid_argument if k > N or k == 0.
ClassificationResult knn_classify(const ReferenceSet& refs, std::span<const double> query,
                                  std::size_t k, const Measure& measure);

/// Dense symmetric matrix, row-major.
class DistanceMatrix {
public:
    explicit DistanceMatrix(std::size_t n = 0) : n_(n), values_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    void set_symmetric(std::size_t i, std::size_t j, double v) {
        values_[i * n_ + j] = v;
        values_[j * n_ + i] = v;
    }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::size_t n_;
    std::vector<double> values_;
};

/// Full pairwise matrix (each pair computed once and mirrored). PQ measures
/// encode `data` with `cb` first; PqSymmetric honours `measure.lb_replace`.
DistanceMatrix pairwise_matrix(std::span<const TimeSeries> data, const Measure& measure,
                               const Codebook* cb = nullptr);

/// Plain symmetric PQ matrix over precomputed codes.
DistanceMatrix pairwise_matrix(const Codebook& cb, std::span<const PQCode> codes);

enum class Linkage { Single, Average, Complete };

Linkage parse_linkage(std::string_view name);

struct Merge {
    std::size_t a = 0;  // cluster ids: leaves are 0..N-1, merge s creates N+s
    std::size_t b = 0;
    double height = 0.0;
    std::size_t size = 0;
};

struct Dendrogram {
    std::size_t leaves = 0;
    std::vector<Merge> merges;
};

/// Lance-Williams agglomeration over a precomputed matrix. Equal heights are
/// resolved by the smallest (lower id, higher id) cluster pair.
Dendrogram agglomerative(const DistanceMatrix& matrix, Linkage linkage);

/// Flat clustering obtained by undoing the last k-1 merges. Labels are
/// numbered by first appearance.
std::vector<std::size_t> cut_k(const Dendrogram& dendrogram, std::size_t k);

double rand_index(std::span<const std::size_t> pred, std::span<const std::size_t> truth);
double adjusted_rand_index(std::span<const std::size_t> pred, std::span<const std::size_t> truth);

/// Maps labels to dense ids in order of first appearance.
std::vector<std::size_t> label_ids(std::span<const std::string> labels);

}  // namespace pqdtw
