#include "pqdtw/stroke.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pqdtw {

void Stroke::validate() const {
    if (points.size() < 2) throw std::invalid_argument("stroke needs at least 2 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.t)) {
            throw std::invalid_argument("stroke point " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && p.t < points[i - 1].t) {
            throw std::invalid_argument("stroke timestamps decrease at point " + std::to_string(i));
        }
    }
}

Stroke smooth(const Stroke& stroke) {
    Stroke out = stroke;
    for (std::size_t i = 1; i + 1 < stroke.size(); ++i) {
        const auto& a = stroke.points[i - 1];
        const auto& b = stroke.points[i];
        const auto& c = stroke.points[i + 1];
        out.points[i].x = (a.x + b.x + c.x) / 3.0;
        out.points[i].y = (a.y + b.y + c.y) / 3.0;
    }
    return out;
}

Stroke redistribute(const Stroke& stroke, std::size_t points) {
    if (points < 2) throw std::invalid_argument("redistribute: need at least 2 points");
    if (stroke.size() < 1) throw DegenerateStroke("redistribute: empty stroke");
    const auto& p = stroke.points;
    std::vector<double> cumulative(p.size(), 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) {
        cumulative[i] = cumulative[i - 1] + std::hypot(p[i].x - p[i - 1].x, p[i].y - p[i - 1].y);
    }
    const double total = cumulative.back();
    if (!(total > 0.0)) throw DegenerateStroke("stroke has zero length (all points coincide)");

    Stroke out;
    out.points.reserve(points);
    out.points.push_back(p.front());
    std::size_t seg = 1;
    for (std::size_t k = 1; k + 1 < points; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(points - 1);
        while (seg + 1 < p.size() && cumulative[seg] < target) ++seg;
        const double len = cumulative[seg] - cumulative[seg - 1];
        const double f = len > 0.0 ? (target - cumulative[seg - 1]) / len : 0.0;
        const auto& a = p[seg - 1];
        const auto& b = p[seg];
        out.points.push_back({a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), a.t + f * (b.t - a.t)});
    }
    out.points.push_back(p.back());
    return out;
}

std::vector<double> to_angles(const Stroke& stroke) {
    constexpr double pi = std::numbers::pi;
    std::vector<StrokePoint> pts;
    pts.reserve(stroke.size());
    for (const auto& q : stroke.points) {
        if (!pts.empty() && pts.back().x == q.x && pts.back().y == q.y) continue;
        pts.push_back(q);
    }
    if (pts.size() < 2) throw DegenerateStroke("stroke has fewer than 2 distinct points");

    std::vector<double> angles;
    angles.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double a = std::atan2(pts[i + 1].y - pts[i].y, pts[i + 1].x - pts[i].x);
        if (!angles.empty()) {
            const double prev = angles.back();
            while (a - prev > pi) a -= 2.0 * pi;
            while (a - prev <= -pi) a += 2.0 * pi;
        }
        angles.push_back(a);
    }
    return angles;
}

TimeSeries preprocess(std::span<const Stroke> strokes, std::size_t resample_points) {
    if (resample_points < 3) throw std::invalid_argument("preprocess: need at least 3 resample points");
    if (strokes.empty()) throw DegenerateStroke("no strokes");

    std::vector<const Stroke*> ordered;
    for (const auto& s : strokes) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto& p = s.points[i];
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.t)) {
                throw std::invalid_argument("stroke point " + std::to_string(i) + " is not finite");
            }
            if (i > 0 && p.t < s.points[i - 1].t) {
                throw std::invalid_argument("stroke timestamps decrease at point " + std::to_string(i));
            }
        }
        if (!s.points.empty()) ordered.push_back(&s);
    }
    if (ordered.empty()) throw DegenerateStroke("all strokes are empty");
    std::stable_sort(ordered.begin(), ordered.end(), [](const Stroke* a, const Stroke* b) {
        return a->points.front().t < b->points.front().t;
    });

    Stroke joined;
    for (const auto* s : ordered) joined.points.insert(joined.points.end(), s->points.begin(), s->points.end());

    const auto angles = to_angles(redistribute(smooth(joined), resample_points));
    const std::size_t target = resample_points - 1;
    if (angles.size() == target) return TimeSeries(angles);
    if (angles.size() == 1) return TimeSeries(std::vector<double>(target, angles.front()));
    return resample_linear(angles, target);
}

std::vector<Stroke> strokes_from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) throw ParseError("strokes: expected an array of strokes");
    std::vector<Stroke> out;
    out.reserve(doc.size());
    for (std::size_t s = 0; s < doc.size(); ++s) {
        const auto& jstroke = doc[s];
        if (!jstroke.is_array()) throw ParseError("strokes: stroke " + std::to_string(s) + " is not an array");
        Stroke stroke;
        for (std::size_t i = 0; i < jstroke.size(); ++i) {
            const auto& jp = jstroke[i];
            StrokePoint p;
            try {
                if (jp.is_object()) {
                    p.x = jp.at("x").get<double>();
                    p.y = jp.at("y").get<double>();
                    p.t = jp.contains("t") ? jp.at("t").get<double>() : static_cast<double>(i);
                } else if (jp.is_array() && jp.size() >= 2) {
                    p.x = jp[0].get<double>();
                    p.y = jp[1].get<double>();
                    p.t = jp.size() > 2 ? jp[2].get<double>() : static_cast<double>(i);
                } else {
                    throw ParseError("not a point");
                }
            } catch (const std::exception&) {
                throw ParseError("strokes: stroke " + std::to_string(s) + " point " + std::to_string(i) +
                                 " must be {\"x\": number, \"y\": number, \"t\": number}");
            }
            stroke.points.push_back(p);
        }
        out.push_back(std::move(stroke));
    }
    return out;
}

nlohmann::json strokes_to_json(std::span<const Stroke> strokes) {
    auto doc = nlohmann::json::array();
    for (const auto& s : strokes) {
        auto js = nlohmann::json::array();
        for (const auto& p : s.points) js.push_back({{"x", p.x}, {"y", p.y}, {"t", p.t}});
        doc.push_back(std::move(js));
    }
    return doc;
}

}  // namespace pqdtw
