#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"

#include "pqdtw/io.hpp"
#include "pqdtw/mining.hpp"
#include "pqdtw/pq.hpp"
#include "pqdtw/service.hpp"
#include "pqdtw/synthetic.hpp"

namespace pqdtw::cli {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::size_t parse_count(const std::string& text, const std::string& what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::invalid_argument(what + ": '" + text + "' is not a non-negative integer");
    }
    return value;
}

LabeledDataset load_dataset(const std::string& path, bool normalize) {
    auto data = load_ucr_tsv(path);
    return normalize ? z_normalize(data) : data;
}

// Segmentation options shared by train and gridsearch.
struct ModelFlags {
    std::size_t subspaces = 0;
    double subspace_percent = 0.0;
    std::size_t clusters = 256;
    std::size_t tail = 0;
    std::size_t level = 3;
    std::string window = "none";
    std::uint64_t seed = 0;
    std::size_t max_iter = 30;
    std::size_t dba_iter = 10;
    bool no_normalize = false;

    void add_to(CLI::App* cmd) {
        auto* m = cmd->add_option("-m,--subspaces", subspaces, "Number of subspaces M");
        cmd->add_option("--subspace-size", subspace_percent, "Subspace size as a percentage of D")
            ->excludes(m)
            ->check(CLI::Range(0.0, 100.0));
        cmd->add_option("-k,--codebook-size", clusters, "Centroids per subspace K (clamped to N)")
            ->capture_default_str()
            ->check(CLI::Range(1, 65536));
        cmd->add_option("-t,--tail", tail, "Tail length t for structure-based cuts")->capture_default_str();
        cmd->add_option("-j,--wavelet-level", level, "MODWT level J")->capture_default_str();
        cmd->add_option("-w,--window", window,
                        "Quantization window: radius in samples, N% of the segment length, or none")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
        cmd->add_option("--max-iter", max_iter, "k-means iterations")->capture_default_str();
        cmd->add_option("--dba-iter", dba_iter, "DBA iterations per update")->capture_default_str();
        cmd->add_flag("--no-normalize", no_normalize, "Do not z-normalize input series");
    }

    TrainOptions options(std::size_t length) const {
        TrainOptions o;
        o.segmentation.segments = subspaces;
        if (subspace_percent > 0.0) o.segmentation.segments = subspaces_for_percent(subspace_percent);
        if (o.segmentation.segments == 0) o.segmentation.segments = 1;
        o.segmentation.tail = tail;
        o.segmentation.level = level;
        o.clusters = clusters;
        o.window = parse_window(window, o.segmentation.segment_length(length));
        o.seed = seed;
        o.max_iter = max_iter;
        o.dba_iter = dba_iter;
        return o;
    }
};

std::string window_name(const Window& w) {
    return w.radius() ? std::to_string(*w.radius()) : "none";
}

void print_memory(std::ostream& out, const Codebook& cb, std::size_t n) {
    const auto r = memory_report(cb, n);
    out << "memory: compression_factor=" << r.compression_factor
        << " code_bytes_per_series=" << r.code_bytes_per_series << " total_code_bytes=" << r.total_code_bytes
        << " overhead_bits=" << r.overhead_bits << " overhead_mb=" << std::setprecision(4)
        << r.overhead_megabytes() << std::setprecision(6) << "\n";
}

// ---------------------------------------------------------------- train

struct TrainCmd {
    ModelFlags model;
    std::string train_path;
    std::string out_codebook;
    std::string out_codes;
    std::string bundle;
    std::string symbols;

    int run(std::ostream& out, std::ostream& err) const {
        const auto data = load_dataset(train_path, !model.no_normalize);
        auto opts = model.options(data.length());
        if (opts.clusters > data.size()) {
            err << "notice: codebook size " << opts.clusters << " exceeds the " << data.size()
                << " training series; clamping K to " << data.size() << "\n";
        }
        const auto start = Clock::now();
        auto cb = train(data.series(), opts);
        const double train_s = seconds_since(start);
        auto codes = encode_all(cb, data.series());

        if (!out_codebook.empty()) save_codebook(cb, out_codebook);
        if (!out_codes.empty()) save_codes({data.labels(), codes}, out_codes);
        if (!bundle.empty()) {
            ModelBundle b;
            b.codebook = cb;
            b.labels = data.labels();
            b.codes = codes;
            b.preprocess.resample_points = data.length() + 1;
            b.preprocess.normalize = !model.no_normalize;
            if (!symbols.empty()) {
                try {
                    b.symbols = json::parse(read_file(symbols)).get<std::map<std::string, std::string>>();
                } catch (const json::exception& e) {
                    throw ParseError(symbols + ": expected a JSON object of symbol display strings: " + e.what());
                }
            }
            save_bundle(b, bundle);
        }
        out << "trained: n=" << data.size() << " d=" << cb.length << " m=" << cb.segments()
            << " k=" << cb.clusters << " segment_length=" << cb.segment_length
            << " window=" << window_name(cb.window) << " seconds=" << train_s << "\n";
        print_memory(out, cb, data.size());
        return 0;
    }
};

// ---------------------------------------------------------------- encode

struct EncodeCmd {
    std::string codebook;
    std::string data_path;
    std::string out_path;
    bool no_normalize = false;

    int run(std::ostream& out, std::ostream&) const {
        const auto cb = load_codebook(codebook);
        const auto data = load_dataset(data_path, !no_normalize);
        if (data.length() != cb.length) {
            throw std::invalid_argument(data_path + ": series length " + std::to_string(data.length()) +
                                        " does not match codebook length " + std::to_string(cb.length));
        }
        EncodedDataset enc{data.labels(), encode_all(cb, data.series())};
        if (out_path.empty()) {
            out << format_codes(enc);
        } else {
            save_codes(enc, out_path);
        }
        return 0;
    }
};

// ---------------------------------------------------------------- knn

struct KnnCmd {
    std::string train_path;
    std::string test_path;
    std::string measure = "pq-asym";
    std::string window = "none";
    std::string codebook;
    bool no_normalize = false;

    int run(std::ostream& out, std::ostream&) const {
        const auto train_set = load_dataset(train_path, !no_normalize);
        const auto test_set = load_dataset(test_path, !no_normalize);
        if (train_set.length() != test_set.length()) {
            throw std::invalid_argument(test_path + ": series length differs from " + train_path);
        }
        auto m = parse_measure(measure, parse_window(window, train_set.length()));

        Codebook cb;
        ReferenceSet refs;
        if (m.uses_codebook()) {
            if (codebook.empty()) throw std::invalid_argument("measure " + measure + " needs --codebook");
            cb = load_codebook(codebook);
            if (cb.length != train_set.length()) {
                throw std::invalid_argument(codebook + ": codebook length " + std::to_string(cb.length) +
                                            " does not match " + train_path);
            }
            refs = ReferenceSet::encoded(train_set, cb);
        } else {
            refs = ReferenceSet::raw(train_set);
        }

        const std::size_t top = std::min<std::size_t>(20, refs.size());
        const std::size_t ks[] = {1, 3, 10, 20};
        std::size_t hits[4] = {0, 0, 0, 0};
        const auto start = Clock::now();
        for (std::size_t i = 0; i < test_set.size(); ++i) {
            const auto result = knn_classify(refs, test_set[i], top, m);
            for (std::size_t j = 0; j < 4; ++j) {
                if (result.contains_in_top(test_set.labels()[i], ks[j])) ++hits[j];
            }
        }
        const double total_ms = seconds_since(start) * 1000.0;
        const double n = static_cast<double>(test_set.size());
        out << "measure,n_train,n_test,top1,top3,top10,top20,total_ms,mean_query_ms\n";
        out << measure_name(m) << "," << train_set.size() << "," << test_set.size();
        for (auto h : hits) out << "," << static_cast<double>(h) / n;
        out << "," << total_ms << "," << total_ms / n << "\n";
        return 0;
    }
};

// ---------------------------------------------------------------- cluster

struct ClusterCmd {
    std::string data_path;
    std::string measure = "dtw";
    std::string window = "none";
    std::string codebook;
    std::string linkage = "complete";
    std::size_t k = 0;
    std::string out_path;
    bool no_normalize = false;

    int run(std::ostream& out, std::ostream&) const {
        const auto data = load_dataset(data_path, !no_normalize);
        if (data.size() < 2) throw std::invalid_argument(data_path + ": clustering needs at least 2 series");
        auto m = parse_measure(measure, parse_window(window, data.length()));
        Codebook cb;
        if (m.uses_codebook()) {
            if (codebook.empty()) throw std::invalid_argument("measure " + measure + " needs --codebook");
            cb = load_codebook(codebook);
        }
        const auto link = parse_linkage(linkage);
        const auto truth = label_ids(data.labels());
        const std::size_t clusters = k > 0 ? k : data.distinct_labels().size();

        const auto start = Clock::now();
        const auto matrix = pairwise_matrix(data.series(), m, m.uses_codebook() ? &cb : nullptr);
        const double matrix_s = seconds_since(start);
        const auto labels = cut_k(agglomerative(matrix, link), clusters);

        std::ostringstream csv;
        csv << "index,label,cluster\n";
        for (std::size_t i = 0; i < data.size(); ++i) csv << i << "," << data.labels()[i] << "," << labels[i] << "\n";
        if (out_path.empty()) {
            out << csv.str();
        } else {
            write_file(out_path, csv.str());
        }
        out << "measure=" << measure_name(m) << " linkage=" << linkage << " k=" << clusters
            << " rand_index=" << rand_index(labels, truth) << " ari=" << adjusted_rand_index(labels, truth)
            << " matrix_seconds=" << matrix_s << "\n";
        return 0;
    }
};

// ---------------------------------------------------------------- bench

struct BenchCmd {
    std::string lengths = "100,200,400,800,1600";
    std::size_t n = 100;
    double subspace_percent = 20.0;
    std::size_t clusters = 256;
    std::uint64_t seed = 0;

    int run(std::ostream& out, std::ostream&) const {
        out << "length,n,m,k,dtw_s,encode_s,pq_matrix_s,pq_total_s,speedup\n";
        for (const auto& item : split(lengths, ',')) {
            const auto r = bench_randomwalk(parse_count(item, "--lengths"), n, subspace_percent, clusters, seed);
            out << r.length << "," << r.series << "," << r.segments << "," << r.clusters << "," << r.dtw_seconds
                << "," << r.encode_seconds << "," << r.pq_matrix_seconds << "," << r.pq_seconds() << ","
                << r.speedup() << "\n";
            out.flush();
        }
        return 0;
    }
};

// ---------------------------------------------------------------- detexify-prepare

// "latex2e-OT1-_alpha" -> "\alpha"; anything else is shown as is.
std::string display_name(const std::string& key) {
    auto pos = key.rfind('-');
    std::string tail = pos == std::string::npos ? key : key.substr(pos + 1);
    if (!tail.empty() && tail.front() == '_') tail = "\\" + tail.substr(1);
    return tail;
}

const json* first_of(const json& record, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        if (auto it = record.find(k); it != record.end()) return &*it;
    }
    return nullptr;
}

struct PrepareCmd {
    std::string input;
    std::string synthetic;  // "CLASSESxPER_CLASS"
    std::uint64_t seed = 0;
    std::size_t max_per_symbol = 0;
    std::size_t max_symbols = 0;
    std::size_t resample = kDefaultResamplePoints;
    std::string out_path;
    std::string out_symbols;
    std::string out_strokes;

    std::vector<json> records() const {
        std::vector<json> out;
        if (!synthetic.empty()) {
            auto parts = split(synthetic, 'x');
            if (parts.size() != 2) throw std::invalid_argument("--synthetic expects CLASSESxEXAMPLES, e.g. 20x200");
            const auto sketches =
                synthetic_sketches(parse_count(parts[0], "--synthetic"), parse_count(parts[1], "--synthetic"), seed);
            for (std::size_t i = 0; i < sketches.size(); ++i) {
                out.push_back({{"id", i}, {"symbol", sketches[i].label}, {"strokes", strokes_to_json(sketches[i].strokes)}});
            }
            return out;
        }
        const std::string text = read_file(input);
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '[') {
            json doc;
            try {
                doc = json::parse(text);
            } catch (const json::parse_error& e) {
                throw ParseError(input + ": malformed JSON: " + e.what());
            }
            for (auto& r : doc) out.push_back(std::move(r));
            return out;
        }
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            out.push_back(json::parse(line, nullptr, false));  // discarded values count as skips
        }
        return out;
    }

    int run(std::ostream& out, std::ostream& err) const {
        if (input.empty() == synthetic.empty()) {
            throw std::invalid_argument("detexify-prepare needs exactly one of --input or --synthetic");
        }
        if (resample < 3) throw std::invalid_argument("--resample must be at least 3");
        const auto recs = records();

        std::vector<TimeSeries> series;
        std::vector<std::string> labels;
        std::map<std::string, std::size_t> per_symbol;
        std::vector<std::string> symbol_order;
        std::map<std::string, std::string> symbols;
        std::ostringstream kept_strokes;
        std::size_t skipped = 0, capped = 0;
        for (const auto& rec : recs) {
            if (!rec.is_object()) {
                ++skipped;
                continue;
            }
            const json* sym = first_of(rec, {"symbol", "key", "label"});
            const json* strokes = first_of(rec, {"strokes", "data"});
            if (!sym || !sym->is_string() || !strokes) {
                ++skipped;
                continue;
            }
            const std::string label = sym->get<std::string>();
            if (std::find(symbol_order.begin(), symbol_order.end(), label) == symbol_order.end()) {
                if (max_symbols > 0 && symbol_order.size() >= max_symbols) {
                    ++capped;
                    continue;
                }
                symbol_order.push_back(label);
            }
            if (max_per_symbol > 0 && per_symbol[label] >= max_per_symbol) {
                ++capped;
                continue;
            }
            try {
                const json parsed = strokes->is_string() ? json::parse(strokes->get<std::string>()) : *strokes;
                const auto s = strokes_from_json(parsed);
                series.push_back(preprocess(s, resample));
                if (!out_strokes.empty()) {
                    kept_strokes << json{{"symbol", label}, {"strokes", strokes_to_json(s)}}.dump() << "\n";
                }
            } catch (const std::exception&) {
                ++skipped;
                continue;
            }
            labels.push_back(label);
            ++per_symbol[label];
            symbols.emplace(label, display_name(label));
        }
        if (series.empty()) throw std::invalid_argument("detexify-prepare: no usable records");

        LabeledDataset data(std::move(series), std::move(labels));
        if (out_path.empty()) {
            out << format_ucr_tsv(data);
        } else {
            save_ucr_tsv(data, out_path);
        }
        if (!out_symbols.empty()) write_file(out_symbols, json(symbols).dump(2) + "\n");
        if (!out_strokes.empty()) write_file(out_strokes, kept_strokes.str());
        err << "prepared: records=" << recs.size() << " series=" << data.size() << " symbols=" << per_symbol.size()
            << " length=" << data.length() << " skipped=" << skipped << " capped=" << capped << "\n";
        return 0;
    }
};

// ---------------------------------------------------------------- serve

struct ServeCmd {
    std::string model;
    int port = 8080;
    std::string host = "0.0.0.0";

    int run(std::ostream& out, std::ostream& err) const {
        ClassifyService service;
        if (!model.empty()) {
            service = ClassifyService(load_bundle(model));
        } else {
            err << "warning: no model given (--model or PQDTW_MODEL); /classify will answer 503\n";
        }
        httplib::Server server;
        mount_routes(server, service);
        out << "listening on " << host << ":" << port << "\n";
        out.flush();
        if (!server.listen(host, port)) {
            throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
        }
        return 0;
    }
};

// ---------------------------------------------------------------- gridsearch

struct GridCmd {
    std::string train_path;
    std::string subspaces = "2,4,8";
    std::string tails = "0";
    std::string levels = "3";
    std::string windows = "10%";
    std::size_t clusters = 256;
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    bool no_normalize = false;

    // Fraction of held-out series whose PQ-sym 1NN label is wrong.
    double cv_error(const LabeledDataset& data, const TrainOptions& opts,
                    const std::vector<std::size_t>& order) const {
        std::size_t wrong = 0;
        for (std::size_t f = 0; f < folds; ++f) {
            std::vector<std::size_t> train_rows, test_rows;
            for (std::size_t i = 0; i < order.size(); ++i) {
                (i % folds == f ? test_rows : train_rows).push_back(order[i]);
            }
            if (test_rows.empty() || train_rows.empty()) continue;
            const auto tr = data.subset(train_rows);
            const auto te = data.subset(test_rows);
            const auto cb = train(tr.series(), opts);
            const auto tr_codes = encode_all(cb, tr.series());
            for (std::size_t i = 0; i < te.size(); ++i) {
                const auto code = encode(cb, te[i]);
                std::size_t best = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < tr_codes.size(); ++j) {
                    const double d = sym_distance(cb, code, tr_codes[j]);
                    if (d < best_d) {
                        best_d = d;
                        best = j;
                    }
                }
                if (tr.labels()[best] != te.labels()[i]) ++wrong;
            }
        }
        return static_cast<double>(wrong) / static_cast<double>(data.size());
    }

    int run(std::ostream& out, std::ostream& err) const {
        const auto data = load_dataset(train_path, !no_normalize);
        if (folds < 2 || folds > data.size()) throw std::invalid_argument("--folds must be in [2, N]");

        std::vector<std::size_t> order(data.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(seed);
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

        out << "subspaces,tail,level,window,radius,cv_error\n";
        double best = std::numeric_limits<double>::infinity();
        std::string best_row;
        for (const auto& m : split(subspaces, ',')) {
            for (const auto& t : split(tails, ',')) {
                for (const auto& j : split(levels, ',')) {
                    for (const auto& w : split(windows, ',')) {
                        ModelFlags flags;
                        flags.subspaces = parse_count(m, "--subspaces");
                        flags.tail = parse_count(t, "--tails");
                        flags.level = parse_count(j, "--levels");
                        flags.window = w;
                        flags.clusters = clusters;
                        flags.seed = seed;
                        TrainOptions opts;
                        try {
                            opts = flags.options(data.length());
                            opts.segmentation.validate(data.length());
                        } catch (const std::invalid_argument& e) {
                            err << "skipping M=" << m << " t=" << t << " J=" << j << ": " << e.what() << "\n";
                            continue;
                        }
                        const double e = cv_error(data, opts, order);
                        std::ostringstream row;
                        row << m << "," << t << "," << j << "," << w << "," << window_name(opts.window) << "," << e;
                        out << row.str() << "\n";
                        out.flush();
                        if (e < best) {
                            best = e;
                            best_row = row.str();
                        }
                    }
                }
            }
        }
        if (!best_row.empty()) err << "best: " << best_row << "\n";
        return 0;
    }
};

}  // namespace

Window parse_window(const std::string& text, std::size_t length) {
    if (text.empty() || text == "none" || text == "full") return Window::unconstrained();
    if (text.back() == '%') {
        double p = 0.0;
        const auto body = text.substr(0, text.size() - 1);
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), p);
        if (ec != std::errc() || ptr != body.data() + body.size() || p < 0.0 || p > 100.0) {
            throw std::invalid_argument("window '" + text + "' is not a percentage in [0, 100]");
        }
        return Window::from_percent(p, length);
    }
    return Window(parse_count(text, "window"));
}

std::size_t subspaces_for_percent(double percent) {
    if (!(percent > 0.0) || percent > 100.0) throw std::invalid_argument("subspace size must be in (0, 100]");
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(100.0 / percent)));
}

BenchResult bench_randomwalk(std::size_t length, std::size_t n, double subspace_percent, std::size_t clusters,
                             std::uint64_t seed) {
    BenchResult r;
    r.length = length;
    r.series = n;
    const auto data = random_walks(n, length, seed);

    TrainOptions opts;
    opts.segmentation = SegmentationParams{subspaces_for_percent(subspace_percent), 0, 1};
    opts.clusters = clusters;
    opts.window = Window::unconstrained();
    opts.seed = seed;
    const auto cb = train(random_walks(n, length, seed + 1), opts);
    r.segments = cb.segments();
    r.clusters = cb.clusters;

    auto start = Clock::now();
    const auto exact = pairwise_matrix(data, Measure::dtw());
    r.dtw_seconds = seconds_since(start);

    start = Clock::now();
    const auto codes = encode_all(cb, data);
    r.encode_seconds = seconds_since(start);
    start = Clock::now();
    const auto approx = pairwise_matrix(cb, codes);
    r.pq_matrix_seconds = seconds_since(start);
    (void)exact;
    (void)approx;
    return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Product quantization under dynamic time warping"};
    app.name(args.empty() ? "pqdtw" : args[0]);
    app.require_subcommand(1);
    app.set_version_flag("--version", "pqdtw 0.1.0");

    TrainCmd train_cmd;
    auto* train_app = app.add_subcommand("train", "Learn a codebook and encode the training set");
    train_cmd.model.add_to(train_app);
    train_app->add_option("--train", train_cmd.train_path, "Labeled UCR TSV file")->required();
    train_app->add_option("--out-codebook", train_cmd.out_codebook, "Codebook JSON output");
    train_app->add_option("--out-codes", train_cmd.out_codes, "Encoded training set CSV output");
    train_app->add_option("--bundle", train_cmd.bundle, "Also write a serving bundle (angle-series input)");
    train_app->add_option("--symbols", train_cmd.symbols, "Symbol display JSON for the bundle");

    EncodeCmd encode_cmd;
    auto* encode_app = app.add_subcommand("encode", "Encode a dataset with a trained codebook");
    encode_app->add_option("--codebook", encode_cmd.codebook, "Codebook JSON")->required();
    encode_app->add_option("--data", encode_cmd.data_path, "UCR TSV file")->required();
    encode_app->add_option("-o,--out", encode_cmd.out_path, "Codes CSV output (default stdout)");
    encode_app->add_flag("--no-normalize", encode_cmd.no_normalize, "Do not z-normalize input series");

    KnnCmd knn_cmd;
    auto* knn_app = app.add_subcommand("knn", "Top-k nearest-neighbour accuracy and query time");
    knn_app->add_option("--train", knn_cmd.train_path, "Reference UCR TSV")->required();
    knn_app->add_option("--test", knn_cmd.test_path, "Query UCR TSV")->required();
    knn_app->add_option("--measure", knn_cmd.measure, "ed, dtw, pq-sym or pq-asym")->capture_default_str();
    knn_app->add_option("-w,--window", knn_cmd.window, "DTW window: radius, N% of D, or none")->capture_default_str();
    knn_app->add_option("--codebook", knn_cmd.codebook, "Codebook JSON for PQ measures");
    knn_app->add_flag("--no-normalize", knn_cmd.no_normalize, "Do not z-normalize input series");

    ClusterCmd cluster_cmd;
    auto* cluster_app = app.add_subcommand("cluster", "Agglomerative clustering with RI and ARI");
    cluster_app->add_option("--data", cluster_cmd.data_path, "Labeled UCR TSV")->required();
    cluster_app->add_option("--measure", cluster_cmd.measure, "ed, dtw, pq-sym, pq-sym-lb or pq-asym")
        ->capture_default_str();
    cluster_app->add_option("-w,--window", cluster_cmd.window, "DTW window")->capture_default_str();
    cluster_app->add_option("--codebook", cluster_cmd.codebook, "Codebook JSON for PQ measures");
    cluster_app->add_option("--linkage", cluster_cmd.linkage, "single, average or complete")
        ->capture_default_str()
        ->check(CLI::IsMember({"single", "average", "complete"}));
    cluster_app->add_option("-k,--clusters", cluster_cmd.k, "Number of clusters (default: distinct labels)");
    cluster_app->add_option("-o,--out", cluster_cmd.out_path, "Cluster labels CSV output (default stdout)");
    cluster_app->add_flag("--no-normalize", cluster_cmd.no_normalize, "Do not z-normalize input series");

    BenchCmd bench_cmd;
    auto* bench_app = app.add_subcommand("bench-randomwalk", "Pairwise-matrix timing on random walks");
    bench_app->add_option("--lengths", bench_cmd.lengths, "Comma-separated series lengths")->capture_default_str();
    bench_app->add_option("-n,--series", bench_cmd.n, "Number of walks")->capture_default_str()->check(CLI::Range(2, 1000000));
    bench_app->add_option("--subspace-size", bench_cmd.subspace_percent, "Subspace size in % of length")
        ->capture_default_str();
    bench_app->add_option("-k,--codebook-size", bench_cmd.clusters, "K (clamped to n)")->capture_default_str();
    bench_app->add_option("--seed", bench_cmd.seed, "Random seed")->capture_default_str();

    PrepareCmd prep_cmd;
    auto* prep_app = app.add_subcommand("detexify-prepare", "Turn stroke records into an angle-series dataset");
    prep_app->add_option("--input", prep_cmd.input, "JSON array or JSON-lines stroke records");
    prep_app->add_option("--synthetic", prep_cmd.synthetic, "Generate CLASSESxEXAMPLES synthetic sketches instead");
    prep_app->add_option("--seed", prep_cmd.seed, "Seed for --synthetic")->capture_default_str();
    prep_app->add_option("--max-per-symbol", prep_cmd.max_per_symbol, "Cap examples per symbol (0 = no cap)");
    prep_app->add_option("--max-symbols", prep_cmd.max_symbols, "Keep only the first N symbols (0 = all)");
    prep_app->add_option("--resample", prep_cmd.resample, "Points after redistribution (R)")->capture_default_str();
    prep_app->add_option("-o,--out", prep_cmd.out_path, "UCR TSV output (default stdout)");
    prep_app->add_option("--out-symbols", prep_cmd.out_symbols, "Symbol display JSON output");
    prep_app->add_option("--out-strokes", prep_cmd.out_strokes, "JSON-lines copy of the kept stroke records");

    ServeCmd serve_cmd;
    auto* serve_app = app.add_subcommand("serve", "Run the HTTP stroke classifier");
    serve_app->add_option("--model", serve_cmd.model, "Model bundle JSON")->envname("PQDTW_MODEL");
    serve_app->add_option("--port", serve_cmd.port, "TCP port")->envname("PQDTW_PORT")->capture_default_str();
    serve_app->add_option("--host", serve_cmd.host, "Bind address")->capture_default_str();

    GridCmd grid_cmd;
    auto* grid_app = app.add_subcommand("gridsearch", "Cross-validated grid over M, t, J and window");
    grid_app->add_option("--train", grid_cmd.train_path, "Labeled UCR TSV")->required();
    grid_app->add_option("--subspaces", grid_cmd.subspaces, "Comma-separated M values")->capture_default_str();
    grid_app->add_option("--tails", grid_cmd.tails, "Comma-separated t values")->capture_default_str();
    grid_app->add_option("--levels", grid_cmd.levels, "Comma-separated J values")->capture_default_str();
    grid_app->add_option("--windows", grid_cmd.windows, "Comma-separated windows")->capture_default_str();
    grid_app->add_option("-k,--codebook-size", grid_cmd.clusters, "K")->capture_default_str();
    grid_app->add_option("--folds", grid_cmd.folds, "Cross-validation folds")->capture_default_str();
    grid_app->add_option("--seed", grid_cmd.seed, "Seed for fold assignment and training")->capture_default_str();
    grid_app->add_flag("--no-normalize", grid_cmd.no_normalize, "Do not z-normalize input series");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (train_app->parsed()) return train_cmd.run(out, err);
        if (encode_app->parsed()) return encode_cmd.run(out, err);
        if (knn_app->parsed()) return knn_cmd.run(out, err);
        if (cluster_app->parsed()) return cluster_cmd.run(out, err);
        if (bench_app->parsed()) return bench_cmd.run(out, err);
        if (prep_app->parsed()) return prep_cmd.run(out, err);
        if (serve_app->parsed()) return serve_cmd.run(out, err);
        if (grid_app->parsed()) return grid_cmd.run(out, err);
    } catch (const std::exception& e) {
        err << app.get_name() << ": error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace pqdtw::cli
