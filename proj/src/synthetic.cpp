#include "pqdtw/synthetic.hpp"

#include <cmath>
#include <numbers>

namespace pqdtw {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    while (u <= 0.0) u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double theta = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::vector<TimeSeries> random_walks(std::size_t count, std::size_t length, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<TimeSeries> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> v(length);
        double acc = 0.0;
        for (auto& x : v) {
            acc += rng.normal();
            x = acc;
        }
        out.emplace_back(std::move(v));
    }
    return out;
}

namespace {

struct Prototype {
    // x(u) = sum_h ax[h] sin(2 pi h u + px[h]), same for y.
    std::vector<double> ax, px, ay, py;

    std::pair<double, double> at(double u) const {
        double x = 0.0, y = 0.0;
        for (std::size_t h = 0; h < ax.size(); ++h) {
            const double w = 2.0 * std::numbers::pi * static_cast<double>(h + 1) * u * 0.5;
            x += ax[h] * std::sin(w + px[h]);
            y += ay[h] * std::sin(w + py[h]);
        }
        return {x, y};
    }
};

}  // namespace

std::vector<Sketch> synthetic_sketches(std::size_t classes, std::size_t per_class, std::uint64_t seed) {
    constexpr std::size_t kHarmonics = 3;
    constexpr std::size_t kFamily = 4;  // classes per family of look-alike shapes
    constexpr double pi = std::numbers::pi;
    Rng rng(seed);

    auto random_prototype = [&](double amplitude) {
        Prototype p;
        for (std::size_t h = 0; h < kHarmonics; ++h) {
            const double scale = amplitude / static_cast<double>(h + 1);
            p.ax.push_back(rng.uniform(-1.0, 1.0) * scale);
            p.ay.push_back(rng.uniform(-1.0, 1.0) * scale);
            p.px.push_back(rng.uniform(0.0, 2.0 * pi));
            p.py.push_back(rng.uniform(0.0, 2.0 * pi));
        }
        return p;
    };

    // Classes in a family share a base shape and differ by a moderate offset.
    std::vector<Prototype> protos;
    Prototype base;
    for (std::size_t c = 0; c < classes; ++c) {
        if (c % kFamily == 0) base = random_prototype(1.0);
        const Prototype delta = random_prototype(0.45);
        Prototype p = base;
        for (std::size_t h = 0; h < kHarmonics; ++h) {
            p.ax[h] += delta.ax[h];
            p.ay[h] += delta.ay[h];
            p.px[h] += 0.3 * rng.normal();
            p.py[h] += 0.3 * rng.normal();
        }
        protos.push_back(std::move(p));
    }

    std::vector<Sketch> out;
    out.reserve(classes * per_class);
    for (std::size_t e = 0; e < per_class; ++e) {
        for (std::size_t c = 0; c < classes; ++c) {
            // Per-drawing shape variation on top of the class prototype.
            Prototype p = protos[c];
            for (std::size_t h = 0; h < kHarmonics; ++h) {
                const double scale = 0.12 / static_cast<double>(h + 1);
                p.ax[h] += scale * rng.normal();
                p.ay[h] += scale * rng.normal();
            }
            const std::size_t n_points = 20 + rng.index(40);
            // Monotone warp u -> u + a sin(pi u) (|a| < 1/pi keeps it monotone).
            const double warp = rng.uniform(-0.3, 0.3);
            const double scale = rng.uniform(0.5, 2.0);
            const double aspect = rng.uniform(0.8, 1.25);
            const double rot = rng.uniform(-0.2, 0.2);
            const double dx = rng.uniform(-100.0, 100.0);
            const double dy = rng.uniform(-100.0, 100.0);
            const double speed = rng.uniform(0.5, 2.0);
            const double jitter = 0.02;
            // Some drawings lift the pen once and skip a little of the curve.
            const std::size_t lift = rng.uniform() < 0.3 ? 5 + rng.index(n_points - 10) : n_points;

            Sketch sk{"sym" + std::to_string(c), {Stroke{}}};
            double t = rng.uniform(0.0, 50.0);
            for (std::size_t i = 0; i < n_points; ++i) {
                if (i == lift) {
                    sk.strokes.emplace_back();
                    t += rng.uniform(50.0, 200.0);
                    continue;
                }
                const double u0 = static_cast<double>(i) / static_cast<double>(n_points - 1);
                const double u = u0 + warp * std::sin(pi * u0);
                auto [x, y] = p.at(u);
                y *= aspect;
                const double rx = std::cos(rot) * x - std::sin(rot) * y + jitter * rng.normal();
                const double ry = std::sin(rot) * x + std::cos(rot) * y + jitter * rng.normal();
                sk.strokes.back().points.push_back({scale * rx + dx, scale * ry + dy, t});
                t += speed * rng.uniform(5.0, 15.0);
            }
            out.push_back(std::move(sk));
        }
    }
    return out;
}

}  // namespace pqdtw
