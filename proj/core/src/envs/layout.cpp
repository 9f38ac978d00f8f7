#include "pearl/envs/layout.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pearl/core/error.hpp"

namespace pearl {

using nlohmann::json;

const Station* Layout::station(const std::string& n) const {
    for (const auto& s : stations) {
        if (s.name == n) return &s;
    }
    return nullptr;
}

double Layout::physics_or(const std::string& key, double fallback) const {
    auto it = physics.find(key);
    return it == physics.end() ? fallback : it->second;
}

namespace {

const std::set<std::string> kKinds{"office", "multicity", "pinball", "soccer"};

[[noreturn]] void bad(const std::string& what) { throw MalformedLayout(what); }

double number(const json& j, const std::string& where) {
    if (!j.is_number()) bad(where + " must be a number");
    return j.get<double>();
}

geom::Vec2 point(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) bad(where + " must be [x, y]");
    return {number(j[0], where), number(j[1], where)};
}

geom::Rect rect(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 4) bad(where + " must be [x0, y0, x1, y1]");
    geom::Rect r{number(j[0], where), number(j[1], where), number(j[2], where), number(j[3], where)};
    if (!(r.x0 < r.x1 && r.y0 < r.y1)) bad(where + " must have x0 < x1 and y0 < y1");
    return r;
}

std::vector<geom::Segment> segments(const json& j, const std::string& where) {
    if (!j.is_array()) bad(where + " must be a list of [x0, y0, x1, y1]");
    std::vector<geom::Segment> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto w = where + "[" + std::to_string(i) + "]";
        const auto& s = j[i];
        if (!s.is_array() || s.size() != 4) bad(w + " must be [x0, y0, x1, y1]");
        geom::Segment seg{{number(s[0], w), number(s[1], w)}, {number(s[2], w), number(s[3], w)}};
        if (seg.a == seg.b) bad(w + " has zero length");
        out.push_back(seg);
    }
    return out;
}

json rect_json(const geom::Rect& r) { return json::array({r.x0, r.y0, r.x1, r.y1}); }

json segments_json(const std::vector<geom::Segment>& s) {
    json out = json::array();
    for (const auto& w : s) out.push_back({w.a.x, w.a.y, w.b.x, w.b.y});
    return out;
}

void check_keys(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [k, v] : doc.items()) {
        if (!allowed.count(k)) bad("unknown key '" + k + "' in " + where);
    }
}

bool segment_inside(const geom::Rect& b, const geom::Segment& s) {
    auto in = [&](geom::Vec2 p) { return p.x >= b.x0 && p.x <= b.x1 && p.y >= b.y0 && p.y <= b.y1; };
    return in(s.a) && in(s.b);
}

}  // namespace

Layout layout_from_json(const json& doc) {
    if (!doc.is_object()) bad("layout must be a JSON object");
    check_keys(doc,
               {"format", "version", "kind", "name", "bounds", "start", "noise_sigma", "walls",
                "stations", "cities", "obstacles", "hole", "physics"},
               "layout");
    if (doc.value("format", std::string{}) != "pearl-layout") bad("format must be \"pearl-layout\"");
    if (!doc.contains("version") || !doc["version"].is_number_integer()) bad("version must be an integer");
    if (doc["version"].get<int>() != kLayoutFormatVersion) {
        bad("unsupported layout version " + doc["version"].dump());
    }

    Layout l;
    if (!doc.contains("kind") || !doc["kind"].is_string()) bad("kind must be a string");
    l.kind = doc["kind"].get<std::string>();
    if (!kKinds.count(l.kind)) bad("unknown layout kind '" + l.kind + "'");
    l.name = doc.value("name", l.kind);
    if (!doc.contains("bounds")) bad("bounds missing");
    l.bounds = rect(doc["bounds"], "bounds");
    if (doc.contains("start")) l.start = point(doc["start"], "start");
    if (doc.contains("noise_sigma")) {
        l.noise_sigma = number(doc["noise_sigma"], "noise_sigma");
        if (l.noise_sigma < 0.0) bad("noise_sigma must be non-negative");
    }
    if (doc.contains("walls")) l.walls = segments(doc["walls"], "walls");

    if (doc.contains("stations")) {
        const auto& st = doc["stations"];
        if (!st.is_array()) bad("stations must be a list");
        for (std::size_t i = 0; i < st.size(); ++i) {
            const auto w = "stations[" + std::to_string(i) + "]";
            const auto& s = st[i];
            if (!s.is_object()) bad(w + " must be an object");
            check_keys(s, {"name", "area", "city"}, w);
            if (!s.contains("name") || !s["name"].is_string()) bad(w + ".name must be a string");
            if (!s.contains("area")) bad(w + ".area missing");
            Station station{s["name"].get<std::string>(), rect(s["area"], w + ".area"), 0};
            if (s.contains("city")) {
                if (!s["city"].is_number_integer()) bad(w + ".city must be an integer");
                station.city = s["city"].get<int>();
            }
            if (l.station(station.name)) bad("duplicate station '" + station.name + "'");
            l.stations.push_back(std::move(station));
        }
    }

    if (doc.contains("cities")) {
        const auto& cs = doc["cities"];
        if (!cs.is_array()) bad("cities must be a list");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const auto w = "cities[" + std::to_string(i) + "]";
            const auto& c = cs[i];
            if (!c.is_object()) bad(w + " must be an object");
            check_keys(c, {"walls", "airport"}, w);
            City city;
            if (c.contains("walls")) city.walls = segments(c["walls"], w + ".walls");
            if (!c.contains("airport")) bad(w + ".airport missing");
            city.airport = rect(c["airport"], w + ".airport");
            l.cities.push_back(std::move(city));
        }
    }

    if (doc.contains("obstacles")) {
        const auto& obs = doc["obstacles"];
        if (!obs.is_array()) bad("obstacles must be a list of polygons");
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const auto w = "obstacles[" + std::to_string(i) + "]";
            if (!obs[i].is_array() || obs[i].size() < 3) bad(w + " must list at least 3 vertices");
            geom::Polygon poly;
            for (const auto& v : obs[i]) poly.push_back(point(v, w));
            l.obstacles.push_back(std::move(poly));
        }
    }

    if (doc.contains("hole")) {
        const auto& h = doc["hole"];
        if (!h.is_object()) bad("hole must be an object");
        check_keys(h, {"center", "radius"}, "hole");
        if (!h.contains("center") || !h.contains("radius")) bad("hole needs center and radius");
        l.hole = geom::Circle{point(h["center"], "hole.center"), number(h["radius"], "hole.radius")};
        if (l.hole->radius <= 0.0) bad("hole.radius must be positive");
    }

    if (doc.contains("physics")) {
        const auto& p = doc["physics"];
        if (!p.is_object()) bad("physics must be an object");
        for (const auto& [k, v] : p.items()) l.physics[k] = number(v, "physics." + k);
    }

    const auto problems = layout_problems(l);
    if (!problems.empty()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < problems.size(); ++i) os << (i ? "; " : "") << problems[i];
        bad(os.str());
    }
    return l;
}

std::vector<std::string> layout_problems(const Layout& l) {
    std::vector<std::string> out;
    const auto& b = l.bounds;
    auto seg_check = [&](const std::vector<geom::Segment>& walls, const std::string& where) {
        for (std::size_t i = 0; i < walls.size(); ++i) {
            if (!segment_inside(b, walls[i])) out.push_back(where + "[" + std::to_string(i) + "] leaves bounds");
        }
    };
    seg_check(l.walls, "walls");
    for (std::size_t c = 0; c < l.cities.size(); ++c) {
        seg_check(l.cities[c].walls, "cities[" + std::to_string(c) + "].walls");
        if (!b.contains(l.cities[c].airport)) out.push_back("cities[" + std::to_string(c) + "].airport leaves bounds");
    }
    for (const auto& s : l.stations) {
        if (!b.contains(s.area)) out.push_back("station '" + s.name + "' leaves bounds");
        if (!l.cities.empty() && (s.city < 0 || s.city >= static_cast<int>(l.cities.size()))) {
            out.push_back("station '" + s.name + "' names an unknown city");
        }
    }
    for (std::size_t i = 0; i < l.obstacles.size(); ++i) {
        for (const auto& v : l.obstacles[i]) {
            if (!(v.x >= b.x0 && v.x <= b.x1 && v.y >= b.y0 && v.y <= b.y1)) {
                out.push_back("obstacles[" + std::to_string(i) + "] leaves bounds");
                break;
            }
        }
    }
    if (l.start && !b.contains(*l.start)) out.push_back("start leaves bounds");

    auto need = [&](const char* name) {
        if (!l.station(name)) out.push_back(std::string("missing station '") + name + "'");
    };
    if (l.kind == "office") {
        need("coffee");
        need("mail");
        need("office");
        if (!l.start) out.push_back("office layout needs a start point");
    } else if (l.kind == "multicity") {
        if (l.cities.size() != 3) out.push_back("multicity layout needs exactly 3 cities");
        need("package");
        need("destination");
        if (!l.start) out.push_back("multicity layout needs a start point");
    } else if (l.kind == "pinball") {
        if (!l.hole) {
            out.push_back("pinball layout needs a hole");
        } else if (!b.contains(l.hole->center)) {
            out.push_back("hole leaves bounds");
        }
        if (!l.start) out.push_back("pinball layout needs a start point");
        for (std::size_t i = 0; i < l.obstacles.size(); ++i) {
            if (l.start && geom::point_in_polygon(*l.start, l.obstacles[i])) {
                out.push_back("start lies inside obstacles[" + std::to_string(i) + "]");
            }
        }
    }
    return out;
}

const Layout& require_layout(const Layout& l, const std::string& kind) {
    if (l.kind != kind) bad("expected a '" + kind + "' layout, got '" + l.kind + "'");
    const auto problems = layout_problems(l);
    if (!problems.empty()) bad(problems.front());
    return l;
}

json layout_to_json(const Layout& l) {
    json doc{{"format", "pearl-layout"}, {"version", kLayoutFormatVersion}, {"kind", l.kind},
             {"name", l.name}, {"bounds", rect_json(l.bounds)}};
    if (l.start) doc["start"] = {l.start->x, l.start->y};
    if (l.noise_sigma > 0.0) doc["noise_sigma"] = l.noise_sigma;
    if (!l.walls.empty()) doc["walls"] = segments_json(l.walls);
    if (!l.stations.empty()) {
        json st = json::array();
        for (const auto& s : l.stations) {
            st.push_back({{"name", s.name}, {"area", rect_json(s.area)}, {"city", s.city}});
        }
        doc["stations"] = std::move(st);
    }
    if (!l.cities.empty()) {
        json cs = json::array();
        for (const auto& c : l.cities) {
            cs.push_back({{"walls", segments_json(c.walls)}, {"airport", rect_json(c.airport)}});
        }
        doc["cities"] = std::move(cs);
    }
    if (!l.obstacles.empty()) {
        json obs = json::array();
        for (const auto& p : l.obstacles) {
            json poly = json::array();
            for (const auto& v : p) poly.push_back({v.x, v.y});
            obs.push_back(std::move(poly));
        }
        doc["obstacles"] = std::move(obs);
    }
    if (l.hole) doc["hole"] = {{"center", {l.hole->center.x, l.hole->center.y}}, {"radius", l.hole->radius}};
    if (!l.physics.empty()) doc["physics"] = l.physics;
    return doc;
}

Layout load_layout(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedLayout("cannot open layout file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw MalformedLayout("'" + path + "': " + e.what());
    }
    return layout_from_json(doc);
}

}  // namespace pearl
