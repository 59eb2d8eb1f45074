#include "pqdtw/pq.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pqdtw/dba.hpp"

namespace pqdtw {

namespace {

void check_code(const Codebook& cb, const PQCode& code) {
    if (code.size() != cb.segments()) {
        throw std::invalid_argument("code has " + std::to_string(code.size()) + " ids, codebook has " +
                                    std::to_string(cb.segments()) + " subspaces");
    }
    for (std::size_t m = 0; m < code.size(); ++m) {
        if (code.ids[m] >= cb.clusters) {
            throw std::invalid_argument("code id " + std::to_string(code.ids[m]) + " in subspace " +
                                        std::to_string(m) + " is out of range for K=" +
                                        std::to_string(cb.clusters));
        }
    }
}

}  // namespace

void Codebook::validate() const {
    const std::size_t m_count = segments();
    segmentation.validate(length);
    if (segment_length != segmentation.segment_length(length)) {
        throw std::invalid_argument("codebook segment_length " + std::to_string(segment_length) +
                                    " does not equal l + t = " +
                                    std::to_string(segmentation.segment_length(length)));
    }
    if (clusters < 1 || clusters > 65536) throw std::invalid_argument("codebook K out of range");
    if (centroids.size() != m_count || envelopes.size() != m_count) {
        throw std::invalid_argument("codebook centroid/envelope tables do not have M rows");
    }
    if (lut.size() != m_count * clusters * clusters) {
        throw std::invalid_argument("codebook lut does not have M*K*K entries");
    }
    for (std::size_t m = 0; m < m_count; ++m) {
        if (centroids[m].size() != clusters || envelopes[m].size() != clusters) {
            throw std::invalid_argument("subspace " + std::to_string(m) + " does not have K centroids");
        }
        for (std::size_t k = 0; k < clusters; ++k) {
            const auto& c = centroids[m][k];
            const auto& e = envelopes[m][k];
            if (c.size() != segment_length || e.upper.size() != segment_length ||
                e.lower.size() != segment_length) {
                throw std::invalid_argument("centroid " + std::to_string(m) + "/" + std::to_string(k) +
                                            " has the wrong length");
            }
            for (std::size_t i = 0; i < segment_length; ++i) {
                if (!(e.lower[i] <= c[i] && c[i] <= e.upper[i])) {
                    throw std::invalid_argument("envelope " + std::to_string(m) + "/" +
                                                std::to_string(k) + " does not contain its centroid");
                }
            }
        }
        for (std::size_t i = 0; i < clusters; ++i) {
            if (lut_at(m, i, i) != 0.0) {
                throw std::invalid_argument("lut diagonal is nonzero in subspace " + std::to_string(m));
            }
            for (std::size_t j = i + 1; j < clusters; ++j) {
                const double v = lut_at(m, i, j);
                if (!(v >= 0.0) || !std::isfinite(v) || v != lut_at(m, j, i)) {
                    throw std::invalid_argument("lut is not symmetric and non-negative at (" +
                                                std::to_string(m) + ", " + std::to_string(i) + ", " +
                                                std::to_string(j) + ")");
                }
            }
        }
    }
}

Codebook train(std::span<const TimeSeries> data, const TrainOptions& options) {
    if (data.empty()) throw std::invalid_argument("train: empty training set");
    const std::size_t length = data[0].size();
    for (const auto& s : data) {
        if (s.size() != length) throw std::invalid_argument("train: series lengths differ");
    }
    options.segmentation.validate(length);

    Codebook cb;
    cb.length = length;
    cb.segmentation = options.segmentation;
    cb.segment_length = options.segmentation.segment_length(length);
    cb.window = options.window;
    cb.clusters = std::min(options.clusters, data.size());
    if (cb.clusters < 1 || cb.clusters > 65536) throw std::invalid_argument("train: K out of range");

    const std::size_t m_count = cb.segments();
    std::vector<std::vector<TimeSeries>> parts(m_count);
    for (auto& p : parts) p.reserve(data.size());
    for (const auto& s : data) {
        auto segs = segment_series(s, options.segmentation);
        for (std::size_t m = 0; m < m_count; ++m) parts[m].push_back(std::move(segs[m]));
    }

    cb.centroids.resize(m_count);
    cb.envelopes.resize(m_count);
    cb.lut.assign(m_count * cb.clusters * cb.clusters, 0.0);
    for (std::size_t m = 0; m < m_count; ++m) {
        KMeansOptions km;
        km.clusters = cb.clusters;
        km.window = options.window;
        km.max_iter = options.max_iter;
        km.dba_iter = options.dba_iter;
        km.seed = options.seed + m;
        auto model = dba_kmeans(parts[m], km);
        cb.centroids[m] = std::move(model.centroids);

        cb.envelopes[m].reserve(cb.clusters);
        for (const auto& c : cb.centroids[m]) cb.envelopes[m].push_back(keogh_envelope(c, cb.window));

        for (std::size_t i = 0; i < cb.clusters; ++i) {
            for (std::size_t j = i + 1; j < cb.clusters; ++j) {
                const double d2 = dtw_squared(cb.centroids[m][i], cb.centroids[m][j], cb.window);
                cb.lut[(m * cb.clusters + i) * cb.clusters + j] = d2;
                cb.lut[(m * cb.clusters + j) * cb.clusters + i] = d2;
            }
        }
    }
    return cb;
}

std::vector<TimeSeries> subspaces(const Codebook& cb, std::span<const double> s) {
    if (s.size() != cb.length) {
        throw std::invalid_argument("series length " + std::to_string(s.size()) +
                                    " does not match codebook length " + std::to_string(cb.length));
    }
    return segment_series(s, cb.segmentation);
}

PQCode encode_subspaces(const Codebook& cb, std::span<const TimeSeries> parts) {
    if (parts.size() != cb.segments()) throw std::invalid_argument("encode: wrong subspace count");
    PQCode code;
    code.ids.resize(cb.segments());
    for (std::size_t m = 0; m < cb.segments(); ++m) {
        const auto nn = nn_search_cascaded(parts[m], cb.centroids[m], cb.envelopes[m], cb.window);
        code.ids[m] = static_cast<std::uint16_t>(nn.index);
    }
    return code;
}

PQCode encode(const Codebook& cb, std::span<const double> s) {
    return encode_subspaces(cb, subspaces(cb, s));
}

std::vector<PQCode> encode_all(const Codebook& cb, std::span<const TimeSeries> data) {
    std::vector<PQCode> out;
    out.reserve(data.size());
    for (const auto& s : data) out.push_back(encode(cb, s));
    return out;
}

TimeSeries reconstruct(const Codebook& cb, const PQCode& code) {
    check_code(cb, code);
    std::vector<double> values;
    values.reserve(cb.segments() * cb.segment_length);
    for (std::size_t m = 0; m < code.size(); ++m) {
        const auto& c = cb.centroids[m][code.ids[m]];
        values.insert(values.end(), c.begin(), c.end());
    }
    return TimeSeries(std::move(values));
}

double sym_distance(const Codebook& cb, const PQCode& a, const PQCode& b) {
    check_code(cb, a);
    check_code(cb, b);
    double sum = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) sum += cb.lut_at(m, a.ids[m], b.ids[m]);
    return std::sqrt(sum);
}

double sym_distance_lb(const Codebook& cb, const PQCode& a, const PQCode& b,
                       std::span<const TimeSeries> x_parts, std::span<const TimeSeries> y_parts) {
    check_code(cb, a);
    check_code(cb, b);
    if (x_parts.size() != cb.segments() || y_parts.size() != cb.segments()) {
        throw std::invalid_argument("sym_distance_lb: wrong subspace count");
    }
    double sum = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) {
        if (a.ids[m] != b.ids[m]) {
            sum += cb.lut_at(m, a.ids[m], b.ids[m]);
            continue;
        }
        // Same centroid on both sides: lb(x^m, q(y^m)) and lb(q(x^m), y^m)
        // both compare against the shared centroid's envelope.
        const auto& env = cb.envelopes[m][a.ids[m]];
        sum += std::max(lb_keogh_squared(x_parts[m], env), lb_keogh_squared(y_parts[m], env));
    }
    return std::sqrt(sum);
}

double sym_distance_lb(const Codebook& cb, const PQCode& a, const PQCode& b,
                       std::span<const double> x, std::span<const double> y) {
    return sym_distance_lb(cb, a, b, subspaces(cb, x), subspaces(cb, y));
}

AsymmetricTable asym_table(const Codebook& cb, std::span<const double> query) {
    const auto parts = subspaces(cb, query);
    AsymmetricTable t{cb.segments(), cb.clusters, std::vector<double>(cb.segments() * cb.clusters)};
    for (std::size_t m = 0; m < cb.segments(); ++m) {
        for (std::size_t k = 0; k < cb.clusters; ++k) {
            t.d2[m * cb.clusters + k] = dtw_squared(parts[m], cb.centroids[m][k], cb.window);
        }
    }
    return t;
}

double asym_distance(const AsymmetricTable& table, const PQCode& code) {
    if (code.size() != table.segments) {
        throw std::invalid_argument("asym_distance: code has " + std::to_string(code.size()) +
                                    " ids, table has " + std::to_string(table.segments) + " subspaces");
    }
    double sum = 0.0;
    for (std::size_t m = 0; m < code.size(); ++m) {
        if (code.ids[m] >= table.clusters) {
            throw std::invalid_argument("asym_distance: code id " + std::to_string(code.ids[m]) +
                                        " out of range");
        }
        sum += table.d2[m * table.clusters + code.ids[m]];
    }
    return std::sqrt(sum);
}

MemoryReport memory_report(std::size_t length, std::size_t segments, std::size_t clusters,
                           std::size_t n_series) {
    if (segments == 0) throw std::invalid_argument("memory_report: M must be positive");
    MemoryReport r;
    const std::size_t bytes_per_id = clusters <= 256 ? 1 : 2;
    r.code_bytes_per_series = segments * bytes_per_id;
    r.total_code_bytes = r.code_bytes_per_series * n_series;
    r.compression_factor = 32.0 * static_cast<double>(length) /
                           (8.0 * static_cast<double>(r.code_bytes_per_series));
    const std::uint64_t k = clusters;
    r.overhead_bits = 32 * k * (3 * static_cast<std::uint64_t>(length) + k * segments);
    return r;
}

MemoryReport memory_report(const Codebook& cb, std::size_t n_series) {
    return memory_report(cb.length, cb.segments(), cb.clusters, n_series);
}

}  // namespace pqdtw
