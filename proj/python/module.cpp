#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pqdtw/dba.hpp"
#include "pqdtw/io.hpp"
#include "pqdtw/mining.hpp"
#include "pqdtw/pq.hpp"
#include "pqdtw/segmentation.hpp"
#include "pqdtw/stroke.hpp"
#include "pqdtw/synthetic.hpp"

namespace py = pybind11;
using namespace pqdtw;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
    return {a.data(), a.data() + a.size()};
}

TimeSeries to_series(const Array& a) { return TimeSeries(to_vector(a)); }

// Accepts a 2-d array or any sequence of 1-d arrays.
std::vector<TimeSeries> to_series_list(const py::object& obj) {
    std::vector<TimeSeries> out;
    if (py::isinstance<py::array>(obj) && obj.cast<py::array>().ndim() == 2) {
        auto a = obj.cast<Array>();
        const auto n = static_cast<std::size_t>(a.shape(0)), d = static_cast<std::size_t>(a.shape(1));
        for (std::size_t i = 0; i < n; ++i) out.emplace_back(std::vector<double>(a.data() + i * d, a.data() + (i + 1) * d));
        return out;
    }
    for (auto item : obj) out.push_back(to_series(item.cast<Array>()));
    return out;
}

Array to_array(std::span<const double> v) {
    Array a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

py::array_t<double> to_matrix(const DistanceMatrix& m) {
    py::array_t<double> a({m.size(), m.size()});
    std::copy(m.values().begin(), m.values().end(), a.mutable_data());
    return a;
}

Window to_window(std::optional<std::size_t> radius) { return radius ? Window(*radius) : Window::unconstrained(); }

std::optional<std::size_t> from_window(const Window& w) { return w.radius(); }

std::vector<Stroke> to_strokes(const py::object& obj) {
    if (py::isinstance<py::str>(obj)) return strokes_from_json(nlohmann::json::parse(obj.cast<std::string>()));
    std::vector<Stroke> out;
    for (auto stroke : obj) {
        Stroke s;
        for (auto p : stroke) {
            auto t = p.cast<py::sequence>();
            if (t.size() != 3) throw std::invalid_argument("stroke points are (x, y, t) triples");
            s.points.push_back({t[0].cast<double>(), t[1].cast<double>(), t[2].cast<double>()});
        }
        out.push_back(std::move(s));
    }
    return out;
}

PQCode to_code(const std::vector<std::uint16_t>& ids) { return PQCode{ids}; }

Measure make_measure(const std::string& name, std::optional<std::size_t> window) {
    return parse_measure(name, to_window(window));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Product quantization of time series under dynamic time warping";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<DegenerateStroke>(m, "DegenerateStroke", PyExc_ValueError);

    // Elastic distances.
    m.def("euclidean", [](const Array& a, const Array& b) { return euclidean(to_vector(a), to_vector(b)); });
    m.def(
        "dtw",
        [](const Array& a, const Array& b, std::optional<std::size_t> window, double upper_bound) {
            return dtw(to_vector(a), to_vector(b), to_window(window), upper_bound);
        },
        py::arg("a"), py::arg("b"), py::arg("window") = py::none(),
        py::arg("upper_bound") = std::numeric_limits<double>::infinity(),
        "DTW distance; window is a Sakoe-Chiba radius in samples or None.");
    m.def(
        "window_from_percent", [](double p, std::size_t n) { return *Window::from_percent(p, n).radius(); },
        py::arg("percent"), py::arg("length"));
    m.def(
        "keogh_envelope",
        [](const Array& s, std::optional<std::size_t> window) {
            auto e = keogh_envelope(to_vector(s), to_window(window));
            return py::make_tuple(to_array(e.upper), to_array(e.lower));
        },
        py::arg("series"), py::arg("window") = py::none(), "Returns (upper, lower).");
    m.def(
        "lb_keogh",
        [](const Array& q, const Array& c, std::optional<std::size_t> window) {
            return lb_keogh(to_vector(q), keogh_envelope(to_vector(c), to_window(window)));
        },
        py::arg("query"), py::arg("candidate"), py::arg("window") = py::none(),
        "LB_Keogh of the query against the candidate's envelope.");
    m.def("lb_kim", [](const Array& a, const Array& b) { return lb_kim(to_vector(a), to_vector(b)); });
    m.def(
        "nn_search",
        [](const Array& q, const py::object& candidates, std::optional<std::size_t> window) {
            const auto cands = to_series_list(candidates);
            const auto w = to_window(window);
            std::vector<Envelope> envs;
            for (const auto& c : cands) envs.push_back(keogh_envelope(c, w));
            const auto n = nn_search_cascaded(to_vector(q), cands, envs, w);
            return py::make_tuple(n.index, n.distance);
        },
        py::arg("query"), py::arg("candidates"), py::arg("window") = py::none(),
        "Exact DTW nearest neighbour; returns (index, distance).");

    // Segmentation.
    m.def(
        "modwt_scale",
        [](const Array& s, std::size_t levels) {
            const auto c = modwt_scale(to_vector(s), levels);
            py::array_t<double> a({c.levels, c.length});
            std::copy(c.values.begin(), c.values.end(), a.mutable_data());
            return a;
        },
        py::arg("series"), py::arg("levels"), "Haar MODWT scale coefficients, one row per level.");
    m.def(
        "segment_cuts",
        [](const Array& s, std::size_t segments, std::size_t tail, std::size_t level) {
            return plan_segments(to_vector(s), SegmentationParams{segments, tail, level}).cuts;
        },
        py::arg("series"), py::arg("segments"), py::arg("tail") = 0, py::arg("level") = 3);
    m.def(
        "segment",
        [](const Array& s, std::size_t segments, std::size_t tail, std::size_t level) {
            std::vector<Array> out;
            for (const auto& p : segment_series(to_vector(s), SegmentationParams{segments, tail, level})) {
                out.push_back(to_array(p));
            }
            return out;
        },
        py::arg("series"), py::arg("segments"), py::arg("tail") = 0, py::arg("level") = 3,
        "Cuts a series and resamples every segment to l + t samples.");

    // Averaging and clustering of series.
    m.def(
        "dba",
        [](const py::object& members, const Array& init, std::optional<std::size_t> window, std::size_t max_iter) {
            return to_array(dba_barycenter(to_series_list(members), to_series(init), to_window(window), max_iter));
        },
        py::arg("members"), py::arg("init"), py::arg("window") = py::none(), py::arg("max_iter") = 10);
    m.def(
        "dba_kmeans",
        [](const py::object& data, std::size_t k, std::optional<std::size_t> window, std::size_t max_iter,
           std::size_t dba_iter, std::uint64_t seed) {
            KMeansOptions o;
            o.clusters = k;
            o.window = to_window(window);
            o.max_iter = max_iter;
            o.dba_iter = dba_iter;
            o.seed = seed;
            const auto model = dba_kmeans(to_series_list(data), o);
            std::vector<Array> centroids;
            for (const auto& c : model.centroids) centroids.push_back(to_array(c));
            return py::make_tuple(centroids, model.assignments, model.inertia);
        },
        py::arg("data"), py::arg("k"), py::arg("window") = py::none(), py::arg("max_iter") = 30,
        py::arg("dba_iter") = 10, py::arg("seed") = 0, "Returns (centroids, assignments, inertia).");

    // Product quantization.
    py::class_<Codebook>(m, "Codebook")
        .def_readonly("length", &Codebook::length)
        .def_readonly("clusters", &Codebook::clusters)
        .def_readonly("segment_length", &Codebook::segment_length)
        .def_property_readonly("segments", &Codebook::segments)
        .def_property_readonly("tail", [](const Codebook& cb) { return cb.segmentation.tail; })
        .def_property_readonly("level", [](const Codebook& cb) { return cb.segmentation.level; })
        .def_property_readonly("window", [](const Codebook& cb) { return from_window(cb.window); })
        .def_property_readonly("centroids",
                               [](const Codebook& cb) {
                                   py::array_t<double> a({cb.segments(), cb.clusters, cb.segment_length});
                                   auto* out = a.mutable_data();
                                   for (const auto& sub : cb.centroids) {
                                       for (const auto& c : sub) out = std::copy(c.begin(), c.end(), out);
                                   }
                                   return a;
                               })
        .def_property_readonly("lut",
                               [](const Codebook& cb) {
                                   py::array_t<double> a({cb.segments(), cb.clusters, cb.clusters});
                                   std::copy(cb.lut.begin(), cb.lut.end(), a.mutable_data());
                                   return a;
                               })
        .def("encode", [](const Codebook& cb, const Array& s) { return encode(cb, to_vector(s)).ids; })
        .def("encode_all",
             [](const Codebook& cb, const py::object& data) {
                 std::vector<std::vector<std::uint16_t>> out;
                 for (auto& c : encode_all(cb, to_series_list(data))) out.push_back(std::move(c.ids));
                 return out;
             })
        .def("reconstruct", [](const Codebook& cb, const std::vector<std::uint16_t>& code) {
            return to_array(reconstruct(cb, to_code(code)));
        })
        .def("sym_distance", [](const Codebook& cb, const std::vector<std::uint16_t>& a,
                                const std::vector<std::uint16_t>& b) { return sym_distance(cb, to_code(a), to_code(b)); })
        .def("sym_distance_lb",
             [](const Codebook& cb, const Array& x, const Array& y) {
                 const auto xv = to_vector(x), yv = to_vector(y);
                 return sym_distance_lb(cb, encode(cb, xv), encode(cb, yv), xv, yv);
             })
        .def("asym_distance",
             [](const Codebook& cb, const Array& query, const std::vector<std::uint16_t>& code) {
                 return asym_distance(asym_table(cb, to_vector(query)), to_code(code));
             })
        .def("asym_distances",
             [](const Codebook& cb, const Array& query, const std::vector<std::vector<std::uint16_t>>& codes) {
                 const auto table = asym_table(cb, to_vector(query));
                 std::vector<double> out;
                 for (const auto& c : codes) out.push_back(asym_distance(table, to_code(c)));
                 return to_array(out);
             })
        .def("memory_report",
             [](const Codebook& cb, std::size_t n) {
                 const auto r = memory_report(cb, n);
                 py::dict d;
                 d["compression_factor"] = r.compression_factor;
                 d["code_bytes_per_series"] = r.code_bytes_per_series;
                 d["total_code_bytes"] = r.total_code_bytes;
                 d["overhead_bits"] = r.overhead_bits;
                 d["overhead_megabytes"] = r.overhead_megabytes();
                 return d;
             },
             py::arg("n_series") = 0)
        .def("save", [](const Codebook& cb, const std::string& path) { save_codebook(cb, path); })
        .def_static("load", [](const std::string& path) { return load_codebook(path); })
        .def("to_json", [](const Codebook& cb) { return codebook_to_json(cb).dump(); })
        .def_static("from_json", [](const std::string& text) { return codebook_from_json(nlohmann::json::parse(text)); })
        .def("__eq__", [](const Codebook& a, const Codebook& b) { return a == b; })
        .def("__repr__", [](const Codebook& cb) {
            return "<Codebook d=" + std::to_string(cb.length) + " m=" + std::to_string(cb.segments()) +
                   " k=" + std::to_string(cb.clusters) + ">";
        });

    m.def(
        "train",
        [](const py::object& data, std::size_t segments, std::size_t clusters, std::size_t tail, std::size_t level,
           std::optional<std::size_t> window, std::size_t max_iter, std::size_t dba_iter, std::uint64_t seed) {
            TrainOptions o;
            o.segmentation = SegmentationParams{segments, tail, level};
            o.clusters = clusters;
            o.window = to_window(window);
            o.max_iter = max_iter;
            o.dba_iter = dba_iter;
            o.seed = seed;
            const auto series = to_series_list(data);
            py::gil_scoped_release release;
            return train(series, o);
        },
        py::arg("data"), py::arg("segments"), py::arg("clusters") = 256, py::arg("tail") = 0, py::arg("level") = 3,
        py::arg("window") = py::none(), py::arg("max_iter") = 30, py::arg("dba_iter") = 10, py::arg("seed") = 0,
        "Learns a PQ codebook. window is a radius in segment samples, or None.");
    m.def("memory_report", [](std::size_t length, std::size_t segments, std::size_t clusters) {
        const auto r = memory_report(length, segments, clusters, 0);
        return py::make_tuple(r.compression_factor, r.overhead_bits);
    }, py::arg("length"), py::arg("segments"), py::arg("clusters"), "Returns (compression_factor, overhead_bits).");

    // Mining.
    m.def(
        "pairwise",
        [](const py::object& data, const std::string& measure, std::optional<std::size_t> window,
           const Codebook* codebook) {
            const auto m = make_measure(measure, window);
            if (m.uses_codebook() && !codebook) throw std::invalid_argument(measure + " needs a codebook");
            return to_matrix(pairwise_matrix(to_series_list(data), m, codebook));
        },
        py::arg("data"), py::arg("measure") = "dtw", py::arg("window") = py::none(), py::arg("codebook") = nullptr,
        "Pairwise distance matrix under ed, dtw, pq-sym, pq-sym-lb or pq-asym.");
    m.def(
        "cluster",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& matrix, const std::string& linkage,
           std::size_t k) {
            if (matrix.ndim() != 2 || matrix.shape(0) != matrix.shape(1)) {
                throw std::invalid_argument("expected a square distance matrix");
            }
            const auto n = static_cast<std::size_t>(matrix.shape(0));
            DistanceMatrix d(n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) d.set_symmetric(i, j, matrix.at(i, j));
            }
            return cut_k(agglomerative(d, parse_linkage(linkage)), k);
        },
        py::arg("matrix"), py::arg("linkage") = "complete", py::arg("k") = 2,
        "Agglomerative clustering cut into k flat clusters.");
    m.def("rand_index", [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        return rand_index(a, b);
    });
    m.def("adjusted_rand_index", [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        return adjusted_rand_index(a, b);
    });
    m.def(
        "knn",
        [](const py::object& train, const std::vector<std::string>& labels, const Array& query, std::size_t k,
           const std::string& measure, std::optional<std::size_t> window, const Codebook* codebook) {
            const auto m = make_measure(measure, window);
            const LabeledDataset data(to_series_list(train), labels);
            ReferenceSet refs;
            if (m.uses_codebook()) {
                if (!codebook) throw std::invalid_argument(measure + " needs a codebook");
                refs = ReferenceSet::encoded(data, *codebook);
            } else {
                refs = ReferenceSet::raw(data);
            }
            std::vector<std::pair<std::string, double>> out;
            for (const auto& r : knn_classify(refs, to_vector(query), k, m).ranking) out.emplace_back(r.label, r.distance);
            return out;
        },
        py::arg("train"), py::arg("labels"), py::arg("query"), py::arg("k") = 1, py::arg("measure") = "dtw",
        py::arg("window") = py::none(), py::arg("codebook") = nullptr,
        "Top-k distinct labels as (label, distance) pairs.");

    // Strokes.
    m.def(
        "preprocess",
        [](const py::object& strokes, std::size_t resample_points) {
            return to_array(preprocess(to_strokes(strokes), resample_points));
        },
        py::arg("strokes"), py::arg("resample_points") = kDefaultResamplePoints,
        "Angle series from strokes given as stroke JSON text or lists of (x, y, t).");
    m.def(
        "synthetic_sketches",
        [](std::size_t classes, std::size_t per_class, std::uint64_t seed) {
            py::list out;
            for (const auto& sk : synthetic_sketches(classes, per_class, seed)) {
                py::list strokes;
                for (const auto& s : sk.strokes) {
                    py::list pts;
                    for (const auto& p : s.points) pts.append(py::make_tuple(p.x, p.y, p.t));
                    strokes.append(pts);
                }
                out.append(py::make_tuple(sk.label, strokes));
            }
            return out;
        },
        py::arg("classes"), py::arg("per_class"), py::arg("seed") = 0, "List of (label, strokes).");
    m.def(
        "random_walks",
        [](std::size_t count, std::size_t length, std::uint64_t seed) {
            py::array_t<double> a({count, length});
            auto* out = a.mutable_data();
            for (const auto& w : random_walks(count, length, seed)) out = std::copy(w.begin(), w.end(), out);
            return a;
        },
        py::arg("count"), py::arg("length"), py::arg("seed") = 0);
}
