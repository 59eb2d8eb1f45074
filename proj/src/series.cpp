#include "pqdtw/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace pqdtw {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw std::invalid_argument("time series needs at least 2 samples, got " +
                                    std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw std::invalid_argument("time series value at index " + std::to_string(i) +
                                        " is not finite");
        }
    }
}

LabeledDataset::LabeledDataset(std::vector<TimeSeries> series, std::vector<std::string> labels)
    : series_(std::move(series)), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != series_.size()) {
        throw std::invalid_argument("dataset has " + std::to_string(series_.size()) +
                                    " series but " + std::to_string(labels_.size()) + " labels");
    }
    for (std::size_t i = 1; i < series_.size(); ++i) {
        if (series_[i].size() != series_[0].size()) {
            throw std::invalid_argument("series " + std::to_string(i) + " has length " +
                                        std::to_string(series_[i].size()) + ", expected " +
                                        std::to_string(series_[0].size()));
        }
    }
}

LabeledDataset::LabeledDataset(std::vector<TimeSeries> series)
    : LabeledDataset(std::move(series), {}) {}

std::vector<std::string> LabeledDataset::distinct_labels() const {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
        if (seen.insert(l).second) out.push_back(l);
    }
    return out;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
    std::vector<TimeSeries> s;
    std::vector<std::string> l;
    s.reserve(rows.size());
    for (auto r : rows) {
        s.push_back(series_.at(r));
        if (!labels_.empty()) l.push_back(labels_[r]);
    }
    return LabeledDataset(std::move(s), std::move(l));
}

TimeSeries z_normalize(std::span<const double> s) {
    const double n = static_cast<double>(s.size());
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / n);

    std::vector<double> out(s.size(), 0.0);
    if (sd >= kEpsilonStd) {
        for (std::size_t i = 0; i < s.size(); ++i) out[i] = (s[i] - mean) / sd;
    }
    return TimeSeries(std::move(out));
}

LabeledDataset z_normalize(const LabeledDataset& data) {
    std::vector<TimeSeries> out;
    out.reserve(data.size());
    for (const auto& s : data.series()) out.push_back(z_normalize(s.span()));
    return LabeledDataset(std::move(out), data.labels());
}

std::vector<double> resample_linear_values(std::span<const double> s, std::size_t target_len) {
    if (target_len < 2) {
        throw std::invalid_argument("resample target length must be >= 2, got " +
                                    std::to_string(target_len));
    }
    if (s.size() < 2) throw std::invalid_argument("cannot resample fewer than 2 samples");
    if (s.size() == target_len) return {s.begin(), s.end()};

    std::vector<double> out(target_len);
    const double scale = static_cast<double>(s.size() - 1) / static_cast<double>(target_len - 1);
    for (std::size_t i = 0; i < target_len; ++i) {
        const double pos = static_cast<double>(i) * scale;
        auto lo = static_cast<std::size_t>(std::floor(pos));
        if (lo >= s.size() - 1) lo = s.size() - 2;
        const double frac = pos - static_cast<double>(lo);
        out[i] = s[lo] + frac * (s[lo + 1] - s[lo]);
    }
    out.front() = s.front();
    out.back() = s.back();
    return out;
}

TimeSeries resample_linear(std::span<const double> s, std::size_t target_len) {
    return TimeSeries(resample_linear_values(s, target_len));
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view field, const std::string& where) {
    while (!field.empty() && (field.front() == ' ')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(where + ": non-numeric value '" + std::string(field) + "'");
    }
    return v;
}

}  // namespace

LabeledDataset parse_ucr_tsv(const std::string& text, const std::string& source) {
    std::vector<TimeSeries> series;
    std::vector<std::string> labels;
    std::size_t expected = 0;
    std::size_t line_no = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        auto fields = split_fields(line);
        if (fields.size() < 3) {
            throw ParseError(where + ": expected a label and at least 2 values");
        }
        const std::size_t n_values = fields.size() - 1;
        if (expected == 0) {
            expected = n_values;
        } else if (n_values != expected) {
            throw ParseError(where + ": row has " + std::to_string(n_values) +
                             " values, expected " + std::to_string(expected));
        }
        std::vector<double> values;
        values.reserve(n_values);
        for (std::size_t i = 1; i < fields.size(); ++i) values.push_back(parse_double(fields[i], where));
        try {
            series.emplace_back(std::move(values));
        } catch (const std::invalid_argument& e) {
            throw ParseError(where + ": " + e.what());
        }
        labels.emplace_back(fields[0]);
    }
    if (series.empty()) throw ParseError(source + ": empty dataset");
    return LabeledDataset(std::move(series), std::move(labels));
}

LabeledDataset load_ucr_tsv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ucr_tsv(buf.str(), path.string());
}

std::string format_ucr_tsv(const LabeledDataset& data) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < data.size(); ++i) {
        out += data.labels().empty() ? std::string("0") : data.labels()[i];
        for (double v : data[i]) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
            out += '\t';
            out.append(buf, ptr);
        }
        out += '\n';
    }
    return out;
}

void save_ucr_tsv(const LabeledDataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << format_ucr_tsv(data);
}

}  // namespace pqdtw
