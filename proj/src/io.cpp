#include "pqdtw/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pqdtw {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << content;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

json codebook_to_json(const Codebook& cb) {
    json doc;
    doc["version"] = Codebook::kVersion;
    doc["d"] = cb.length;
    doc["m"] = cb.segments();
    doc["k"] = cb.clusters;
    doc["window_radius"] = cb.window.constrained() ? json(*cb.window.radius()) : json(nullptr);
    doc["tail"] = cb.segmentation.tail;
    doc["wavelet_level"] = cb.segmentation.level;
    doc["segment_length"] = cb.segment_length;

    json centroids = json::array();
    json envelopes = json::array();
    json lut = json::array();
    for (std::size_t m = 0; m < cb.segments(); ++m) {
        json cs = json::array();
        json es = json::array();
        json rows = json::array();
        for (std::size_t k = 0; k < cb.clusters; ++k) {
            cs.push_back(cb.centroids[m][k].values());
            es.push_back({{"upper", cb.envelopes[m][k].upper}, {"lower", cb.envelopes[m][k].lower}});
            json row = json::array();
            for (std::size_t j = 0; j < cb.clusters; ++j) row.push_back(cb.lut_at(m, k, j));
            rows.push_back(std::move(row));
        }
        centroids.push_back(std::move(cs));
        envelopes.push_back(std::move(es));
        lut.push_back(std::move(rows));
    }
    doc["centroids"] = std::move(centroids);
    doc["lut"] = std::move(lut);
    doc["envelopes"] = std::move(envelopes);
    return doc;
}

namespace {

template <typename T>
T field(const json& doc, const char* name) {
    if (!doc.contains(name)) throw ParseError(std::string("codebook: missing field '") + name + "'");
    try {
        return doc.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("codebook: field '") + name + "' has the wrong type: " + e.what());
    }
}

const json& member(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw ParseError(std::string("codebook: missing field '") + key + "'");
    return *it;
}

const json& array_of(const json& node, std::size_t n, const std::string& what) {
    if (!node.is_array() || node.size() != n) {
        throw ParseError("codebook: " + what + " must be an array of " + std::to_string(n) + " entries");
    }
    return node;
}

}  // namespace

Codebook codebook_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("codebook: document is not a JSON object");
    const int version = field<int>(doc, "version");
    if (version != Codebook::kVersion) {
        throw ParseError("codebook: unsupported version " + std::to_string(version) + " (expected " +
                         std::to_string(Codebook::kVersion) + ")");
    }
    Codebook cb;
    cb.length = field<std::size_t>(doc, "d");
    cb.segmentation.segments = field<std::size_t>(doc, "m");
    cb.clusters = field<std::size_t>(doc, "k");
    cb.segmentation.tail = field<std::size_t>(doc, "tail");
    cb.segmentation.level = field<std::size_t>(doc, "wavelet_level");
    cb.segment_length = field<std::size_t>(doc, "segment_length");
    if (!doc.contains("window_radius")) throw ParseError("codebook: missing field 'window_radius'");
    cb.window = doc["window_radius"].is_null() ? Window::unconstrained()
                                               : Window(field<std::size_t>(doc, "window_radius"));

    const std::size_t m_count = cb.segmentation.segments;
    const auto& centroids = array_of(member(doc, "centroids"), m_count, "centroids");
    const auto& envelopes = array_of(member(doc, "envelopes"), m_count, "envelopes");
    const auto& lut = array_of(member(doc, "lut"), m_count, "lut");
    try {
        cb.centroids.resize(m_count);
        cb.envelopes.resize(m_count);
        cb.lut.reserve(m_count * cb.clusters * cb.clusters);
        for (std::size_t m = 0; m < m_count; ++m) {
            const std::string sub = "subspace " + std::to_string(m);
            array_of(centroids[m], cb.clusters, sub + " centroids");
            array_of(envelopes[m], cb.clusters, sub + " envelopes");
            array_of(lut[m], cb.clusters, sub + " lut");
            for (std::size_t k = 0; k < cb.clusters; ++k) {
                cb.centroids[m].emplace_back(centroids[m][k].get<std::vector<double>>());
                Envelope env;
                env.upper = envelopes[m][k].at("upper").get<std::vector<double>>();
                env.lower = envelopes[m][k].at("lower").get<std::vector<double>>();
                env.window = cb.window;
                cb.envelopes[m].push_back(std::move(env));
                const auto& row = array_of(lut[m][k], cb.clusters, sub + " lut row");
                for (const auto& v : row) cb.lut.push_back(v.get<double>());
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("codebook: malformed table: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("codebook: ") + e.what());
    }
    try {
        cb.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("codebook invariant violated: ") + e.what());
    }
    return cb;
}

void save_codebook(const Codebook& cb, const std::filesystem::path& path) {
    write_file(path, codebook_to_json(cb).dump() + "\n");
}

Codebook load_codebook(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": truncated or malformed JSON: " + e.what());
    }
    try {
        return codebook_from_json(doc);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string format_codes(const EncodedDataset& data) {
    std::string out;
    for (std::size_t i = 0; i < data.codes.size(); ++i) {
        out += i < data.labels.size() ? data.labels[i] : std::string();
        for (auto id : data.codes[i].ids) {
            out += ',';
            out += std::to_string(id);
        }
        out += '\n';
    }
    return out;
}

EncodedDataset parse_codes(const std::string& text, const std::string& source) {
    EncodedDataset data;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (true) {
            auto pos = rest.find(',');
            fields.push_back(rest.substr(0, pos));
            if (pos == std::string_view::npos) break;
            rest.remove_prefix(pos + 1);
        }
        if (fields.size() < 2) throw ParseError(where + ": expected label and at least one id");
        if (width == 0) width = fields.size();
        if (fields.size() != width) throw ParseError(where + ": ragged code row");
        PQCode code;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            unsigned v = 0;
            auto [ptr, ec] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
            if (ec != std::errc() || ptr != fields[i].data() + fields[i].size() || v > 65535) {
                throw ParseError(where + ": invalid code id '" + std::string(fields[i]) + "'");
            }
            code.ids.push_back(static_cast<std::uint16_t>(v));
        }
        data.labels.emplace_back(fields[0]);
        data.codes.push_back(std::move(code));
    }
    return data;
}

void save_codes(const EncodedDataset& data, const std::filesystem::path& path) {
    write_file(path, format_codes(data));
}

EncodedDataset load_codes(const std::filesystem::path& path) {
    return parse_codes(read_file(path), path.string());
}

}  // namespace pqdtw
