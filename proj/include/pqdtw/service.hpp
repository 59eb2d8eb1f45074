#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "pqdtw/mining.hpp"
#include "pqdtw/pq.hpp"
#include "pqdtw/stroke.hpp"

namespace httplib {
class Server;
}

namespace pqdtw {

struct PreprocessConfig {
    std::size_t resample_points = kDefaultResamplePoints;
    bool normalize = false;
};

/// Everything the classifier needs at serving time: the codebook, the
/// encoded training strokes and their labels.
struct ModelBundle {
    static constexpr int kVersion = 1;

    Codebook codebook;
    std::vector<std::string> labels;
    std::vector<PQCode> codes;
    std::map<std::string, std::string> symbols;  // label -> display string
    PreprocessConfig preprocess;

    void validate() const;
};

nlohmann::json bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const nlohmann::json& doc);
void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

/// Stroke list -> series fed to the codebook.
TimeSeries prepare_query(std::span<const Stroke> strokes, const PreprocessConfig& config);

struct HttpReply {
    int status = 200;
    nlohmann::json body;
};

/// Request handling for the stroke classifier, independent of the transport.
/// The bundle is immutable once constructed; all methods are const and safe
/// to call from concurrent request threads.
class ClassifyService {
public:
    ClassifyService() = default;
    explicit ClassifyService(ModelBundle bundle);

    bool loaded() const noexcept { return static_cast<bool>(state_); }

    HttpReply health() const;
    HttpReply symbols() const;
    /// POST /classify. `k` defaults to 20; `mode` is "asym" (default) or "sym".
    HttpReply classify(const std::string& body, const std::optional<std::string>& k,
                       const std::optional<std::string>& mode) const;

    /// In-process equivalent of POST /classify.
    ClassificationResult classify_strokes(std::span<const Stroke> strokes, std::size_t k,
                                          const Measure& measure) const;

private:
    struct State {
        ModelBundle bundle;
        ReferenceSet refs;
        std::vector<std::pair<std::string, std::size_t>> counts;
    };
    std::shared_ptr<const State> state_;
};

/// Registers /health, /symbols, /classify and CORS handling on `server`.
void mount_routes(httplib::Server& server, const ClassifyService& service);

}  // namespace pqdtw
