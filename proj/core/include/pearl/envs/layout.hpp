#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pearl/envs/geometry.hpp"

namespace pearl {

inline constexpr int kLayoutFormatVersion = 1;

struct Station {
    std::string name;
    geom::Rect area;
    int city = 0;
};

struct City {
    std::vector<geom::Segment> walls;
    geom::Rect airport;
};

/// Environment geometry loaded from a layout file. Which fields are
/// meaningful depends on `kind` (office, multicity, pinball, soccer).
struct Layout {
    std::string kind;
    std::string name;
    geom::Rect bounds;
    std::optional<geom::Vec2> start;
    double noise_sigma = 0.0;
    std::vector<geom::Segment> walls;
    std::vector<Station> stations;
    std::vector<City> cities;
    std::vector<geom::Polygon> obstacles;
    std::optional<geom::Circle> hole;
    std::map<std::string, double> physics;

    [[nodiscard]] const Station* station(const std::string& name) const;
    [[nodiscard]] double physics_or(const std::string& key, double fallback) const;
};

/// Parses and validates a layout document. Throws MalformedLayout.
Layout layout_from_json(const nlohmann::json& doc);
nlohmann::json layout_to_json(const Layout& layout);

/// Reads a layout file. Throws MalformedLayout (also for I/O and JSON errors).
Layout load_layout(const std::string& path);

/// Geometry checks on an already-parsed layout: stations, walls and
/// obstacles inside bounds, required stations for the kind. Returns the list
/// of problems (empty when valid).
std::vector<std::string> layout_problems(const Layout& layout);

/// Throws MalformedLayout unless `layout` is of `kind` and has no problems.
const Layout& require_layout(const Layout& layout, const std::string& kind);

}  // namespace pearl
