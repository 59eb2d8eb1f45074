#include "pqdtw/service.hpp"

#include <chrono>
#include <charconv>

#include "httplib.h"

#include "pqdtw/io.hpp"

namespace pqdtw {

using nlohmann::json;

void ModelBundle::validate() const {
    codebook.validate();
    if (labels.size() != codes.size()) {
        throw std::invalid_argument("bundle has " + std::to_string(codes.size()) + " codes but " +
                                    std::to_string(labels.size()) + " labels");
    }
    if (codes.empty()) throw std::invalid_argument("bundle has no encoded examples");
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (codes[i].size() != codebook.segments()) {
            throw std::invalid_argument("bundle code " + std::to_string(i) + " has the wrong length");
        }
        for (auto id : codes[i].ids) {
            if (id >= codebook.clusters) {
                throw std::invalid_argument("bundle code " + std::to_string(i) + " has an out-of-range id");
            }
        }
    }
    if (preprocess.resample_points < 3 || preprocess.resample_points - 1 != codebook.length) {
        throw std::invalid_argument("bundle resample_points " + std::to_string(preprocess.resample_points) +
                                    " does not produce series of codebook length " +
                                    std::to_string(codebook.length));
    }
}

json bundle_to_json(const ModelBundle& bundle) {
    json doc;
    doc["version"] = ModelBundle::kVersion;
    doc["preprocess"] = {{"resample_points", bundle.preprocess.resample_points},
                         {"normalize", bundle.preprocess.normalize}};
    doc["codebook"] = codebook_to_json(bundle.codebook);
    doc["labels"] = bundle.labels;
    json codes = json::array();
    for (const auto& c : bundle.codes) codes.push_back(c.ids);
    doc["codes"] = std::move(codes);
    doc["symbols"] = bundle.symbols;
    return doc;
}

ModelBundle bundle_from_json(const json& doc) {
    ModelBundle b;
    try {
        if (doc.at("version").get<int>() != ModelBundle::kVersion) {
            throw ParseError("bundle: unsupported version");
        }
        const auto& pre = doc.at("preprocess");
        b.preprocess.resample_points = pre.at("resample_points").get<std::size_t>();
        b.preprocess.normalize = pre.value("normalize", false);
        b.codebook = codebook_from_json(doc.at("codebook"));
        b.labels = doc.at("labels").get<std::vector<std::string>>();
        for (const auto& c : doc.at("codes")) b.codes.push_back({c.get<std::vector<std::uint16_t>>()});
        if (doc.contains("symbols")) b.symbols = doc["symbols"].get<std::map<std::string, std::string>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bundle: malformed document: ") + e.what());
    }
    try {
        b.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("bundle invariant violated: ") + e.what());
    }
    return b;
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
    write_file(path, bundle_to_json(bundle).dump() + "\n");
}

ModelBundle load_bundle(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": malformed JSON: " + e.what());
    }
    return bundle_from_json(doc);
}

TimeSeries prepare_query(std::span<const Stroke> strokes, const PreprocessConfig& config) {
    auto series = preprocess(strokes, config.resample_points);
    return config.normalize ? z_normalize(series.span()) : series;
}

ClassifyService::ClassifyService(ModelBundle bundle) {
    bundle.validate();
    auto state = std::make_shared<State>();
    state->bundle = std::move(bundle);
    state->refs.labels = state->bundle.labels;
    state->refs.codes = state->bundle.codes;
    state->refs.codebook = &state->bundle.codebook;
    std::map<std::string, std::size_t> counts;
    for (const auto& l : state->bundle.labels) ++counts[l];
    state->counts.assign(counts.begin(), counts.end());
    state_ = std::move(state);
}

HttpReply ClassifyService::health() const {
    return {200,
            {{"status", "ok"},
             {"model_loaded", loaded()},
             {"n_symbols", loaded() ? state_->counts.size() : 0}}};
}

HttpReply ClassifyService::symbols() const {
    if (!loaded()) return {503, {{"error", "model not loaded"}}};
    json list = json::array();
    for (const auto& [label, count] : state_->counts) {
        json entry = {{"symbol", label}, {"example_count", count}};
        if (auto it = state_->bundle.symbols.find(label); it != state_->bundle.symbols.end()) {
            entry["display"] = it->second;
        }
        list.push_back(std::move(entry));
    }
    return {200, list};
}

ClassificationResult ClassifyService::classify_strokes(std::span<const Stroke> strokes, std::size_t k,
                                                       const Measure& measure) const {
    if (!loaded()) throw std::logic_error("model not loaded");
    const auto query = prepare_query(strokes, state_->bundle.preprocess);
    return knn_classify(state_->refs, query, std::min(k, state_->refs.size()), measure);
}

HttpReply ClassifyService::classify(const std::string& body, const std::optional<std::string>& k,
                                    const std::optional<std::string>& mode) const {
    const auto start = std::chrono::steady_clock::now();
    if (!loaded()) return {503, {{"error", "model not loaded"}}};

    std::size_t top = 20;
    if (k) {
        auto [ptr, ec] = std::from_chars(k->data(), k->data() + k->size(), top);
        if (ec != std::errc() || ptr != k->data() + k->size() || top == 0) {
            return {400, {{"error", "query parameter k must be a positive integer"}}};
        }
    }
    Measure measure = Measure::pq_asymmetric();
    if (mode && *mode == "sym") {
        measure = Measure::pq_symmetric();
    } else if (mode && *mode != "asym") {
        return {400, {{"error", "query parameter mode must be 'asym' or 'sym'"}}};
    }

    std::vector<Stroke> strokes;
    try {
        strokes = strokes_from_json(json::parse(body));
    } catch (const json::parse_error& e) {
        return {400, {{"error", std::string("malformed JSON: ") + e.what()}}};
    } catch (const ParseError& e) {
        return {400, {{"error", e.what()}}};
    }
    if (strokes.empty()) return {400, {{"error", "degenerate input: stroke list is empty"}}};

    ClassificationResult result;
    try {
        result = classify_strokes(strokes, top, measure);
    } catch (const DegenerateStroke& e) {
        return {400, {{"error", std::string("degenerate strokes: ") + e.what()}}};
    } catch (const std::invalid_argument& e) {
        return {400, {{"error", e.what()}}};
    }

    json candidates = json::array();
    for (const auto& r : result.ranking) {
        json c = {{"symbol", r.label}, {"score", r.distance}};
        if (auto it = state_->bundle.symbols.find(r.label); it != state_->bundle.symbols.end()) {
            c["display"] = it->second;
        }
        candidates.push_back(std::move(c));
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return {200, {{"candidates", std::move(candidates)}, {"latency_ms", ms}}};
}

namespace {

void send(httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) return std::nullopt;
    return req.get_param_value(name);
}

}  // namespace

void mount_routes(httplib::Server& server, const ClassifyService& service) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.Get("/health", [&service](const httplib::Request&, httplib::Response& res) {
        send(res, service.health());
    });
    server.Get("/symbols", [&service](const httplib::Request&, httplib::Response& res) {
        send(res, service.symbols());
    });
    server.Post("/classify", [&service](const httplib::Request& req, httplib::Response& res) {
        send(res, service.classify(req.body, param(req, "k"), param(req, "mode")));
    });
}

}  // namespace pqdtw
