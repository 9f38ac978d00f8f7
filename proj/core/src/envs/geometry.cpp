#include "pearl/envs/geometry.hpp"

#include <algorithm>
#include <limits>

namespace pearl::geom {

std::vector<Segment> Rect::edges() const {
    return {{{x0, y0}, {x1, y0}}, {{x1, y0}, {x1, y1}}, {{x1, y1}, {x0, y1}}, {{x0, y1}, {x0, y0}}};
}

std::optional<Hit> intersect(Vec2 p, Vec2 d, const Segment& s) {
    const Vec2 e = s.b - s.a;
    const double denom = cross(d, e);
    if (std::abs(denom) < 1e-15) return std::nullopt;  // parallel or degenerate
    const Vec2 w = s.a - p;
    const double t = cross(w, e) / denom;
    const double u = cross(w, d) / denom;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
    const double len = norm(e);
    Vec2 n{-e.y / len, e.x / len};
    if (dot(n, d) > 0.0) n = -1.0 * n;
    return Hit{t, n};
}

std::optional<Hit> first_hit(Vec2 p, Vec2 d, const std::vector<Segment>& walls) {
    std::optional<Hit> best;
    for (const auto& w : walls) {
        auto h = intersect(p, d, w);
        if (h && (!best || h->t < best->t)) best = h;
    }
    return best;
}

std::vector<Segment> polygon_edges(const Polygon& poly) {
    std::vector<Segment> out;
    for (std::size_t i = 0; i < poly.size(); ++i) out.push_back({poly[i], poly[(i + 1) % poly.size()]});
    return out;
}

bool point_in_polygon(Vec2 p, const Polygon& poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[j];
        if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
            inside = !inside;
        }
    }
    return inside;
}

double segment_point_distance(Vec2 a, Vec2 b, Vec2 c) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(c - a, ab) / len2, 0.0, 1.0) : 0.0;
    return norm(a + t * ab - c);
}

Vec2 move_blocked(Vec2 p, Vec2 d, const std::vector<Segment>& walls) {
    const auto hit = first_hit(p, d, walls);
    if (!hit) return p + d;
    const double len = norm(d);
    constexpr double kBackoff = 1e-6;
    const double t = std::max(0.0, hit->t - kBackoff / len);
    return p + t * d;
}

}  // namespace pearl::geom
