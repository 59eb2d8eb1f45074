#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "pqdtw/pq.hpp"

namespace pqdtw {

/// Codebook document, version 1:
///   {version, d, m, k, window_radius (null = unconstrained), tail,
///    wavelet_level, segment_length, centroids[m][k][len], lut[m][k][k],
///    envelopes[m][k]{upper, lower}}
/// Doubles are written in shortest round-trip form, so loading is bit-exact.
nlohmann::json codebook_to_json(const Codebook& cb);

/// Parses and validates a codebook document. Throws ParseError on a version
/// mismatch, missing or mistyped fields, or a violated codebook invariant.
Codebook codebook_from_json(const nlohmann::json& doc);

void save_codebook(const Codebook& cb, const std::filesystem::path& path);
Codebook load_codebook(const std::filesystem::path& path);

/// Encoded dataset: one CSV line per series, `label,id_1,...,id_M`.
struct EncodedDataset {
    std::vector<std::string> labels;
    std::vector<PQCode> codes;
};

std::string format_codes(const EncodedDataset& data);
EncodedDataset parse_codes(const std::string& text, const std::string& source = "<memory>");
void save_codes(const EncodedDataset& data, const std::filesystem::path& path);
EncodedDataset load_codes(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace pqdtw
