#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace pearl::geom {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
    friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

struct Segment {
    Vec2 a;
    Vec2 b;
};

/// Axis-aligned rectangle, half-open like every other region in the library.
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 1.0;
    double y1 = 1.0;

    [[nodiscard]] bool contains(Vec2 p) const { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }
    [[nodiscard]] bool contains(const Rect& r) const {
        return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
    }
    [[nodiscard]] Vec2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    [[nodiscard]] std::vector<Segment> edges() const;
};

struct Circle {
    Vec2 center;
    double radius = 0.0;
};

using Polygon = std::vector<Vec2>;

struct Hit {
    double t = 0.0;  ///< fraction of the motion segment travelled at contact
    Vec2 normal;     ///< unit normal of the wall, facing the incoming motion
};

/// First crossing of the motion p -> p + d with segment s, if any.
std::optional<Hit> intersect(Vec2 p, Vec2 d, const Segment& s);

/// Earliest crossing over a list of segments.
std::optional<Hit> first_hit(Vec2 p, Vec2 d, const std::vector<Segment>& walls);

/// Closed polygon as segments (last vertex joins the first).
std::vector<Segment> polygon_edges(const Polygon& poly);

bool point_in_polygon(Vec2 p, const Polygon& poly);

double segment_point_distance(Vec2 a, Vec2 b, Vec2 c);

/// Moves p by d, stopping just short of the first wall crossed.
Vec2 move_blocked(Vec2 p, Vec2 d, const std::vector<Segment>& walls);

}  // namespace pearl::geom
