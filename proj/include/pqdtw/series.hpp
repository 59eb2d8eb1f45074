#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pqdtw {

/// Raised when an input file cannot be parsed. The message names the
/// offending file and line when one is known.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An equal-spaced, real-valued sequence with at least two finite samples.
///
/// Kernels in this library take `std::span<const double>` so that segments and
/// raw buffers can be passed without copying; a TimeSeries converts implicitly.
class TimeSeries {
public:
    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::span<const double> span() const noexcept { return values_; }
    operator std::span<const double>() const noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
};

/// N series of identical length D, optionally with one opaque label each.
class LabeledDataset {
public:
    LabeledDataset() = default;
    LabeledDataset(std::vector<TimeSeries> series, std::vector<std::string> labels);
    explicit LabeledDataset(std::vector<TimeSeries> series);

    std::size_t size() const noexcept { return series_.size(); }
    bool empty() const noexcept { return series_.empty(); }
    /// Common series length, 0 for an empty dataset.
    std::size_t length() const noexcept { return series_.empty() ? 0 : series_.front().size(); }
    bool has_labels() const noexcept { return !labels_.empty() || series_.empty(); }

    const std::vector<TimeSeries>& series() const noexcept { return series_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const TimeSeries& operator[](std::size_t i) const { return series_[i]; }

    /// Distinct labels in order of first appearance.
    std::vector<std::string> distinct_labels() const;

    /// Subset by row indices (labels follow when present).
    LabeledDataset subset(std::span<const std::size_t> rows) const;

private:
    std::vector<TimeSeries> series_;
    std::vector<std::string> labels_;
};

inline constexpr double kEpsilonStd = 1e-12;

/// Zero mean, unit population standard deviation. Series whose standard
/// deviation is below kEpsilonStd map to all zeros.
TimeSeries z_normalize(std::span<const double> s);

/// Linear interpolation onto `target_len` uniformly spaced points spanning the
/// same parameter range; endpoints are reproduced exactly.
TimeSeries resample_linear(std::span<const double> s, std::size_t target_len);

std::vector<double> resample_linear_values(std::span<const double> s, std::size_t target_len);

/// UCR archive TSV: `label \t v1 \t ... \t vD` per line.
LabeledDataset load_ucr_tsv(const std::filesystem::path& path);
LabeledDataset parse_ucr_tsv(const std::string& text, const std::string& source = "<memory>");
void save_ucr_tsv(const LabeledDataset& data, const std::filesystem::path& path);
std::string format_ucr_tsv(const LabeledDataset& data);

LabeledDataset z_normalize(const LabeledDataset& data);

}  // namespace pqdtw
