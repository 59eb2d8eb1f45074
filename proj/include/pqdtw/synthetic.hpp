#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pqdtw/series.hpp"
#include "pqdtw/stroke.hpp"

namespace pqdtw {

/// Seeded random source with draws defined independently of the standard
/// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) {
        return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
    }
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Cumulative sums of standard normal steps.
std::vector<TimeSeries> random_walks(std::size_t count, std::size_t length, std::uint64_t seed);

/// A labeled sketch: the strokes of one drawn symbol.
struct Sketch {
    std::string label;
    std::vector<Stroke> strokes;
};

/// Sketches of `classes` smooth prototype curves, each example drawn with a
/// random time warp, shape noise, jitter, rotation, scale, offset and drawing
/// speed. Classes come in families of four look-alike shapes, and some
/// drawings are split into two strokes.
std::vector<Sketch> synthetic_sketches(std::size_t classes, std::size_t per_class, std::uint64_t seed);

}  // namespace pqdtw
