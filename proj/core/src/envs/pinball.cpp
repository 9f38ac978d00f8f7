#include "pearl/envs/pinball.hpp"

#include <algorithm>
#include <set>

#include "pearl/core/error.hpp"

namespace pearl {

namespace {

PinballPhysics read_physics(const Layout& l) {
    static const std::set<std::string> kKeys{"dt", "drag", "restitution", "a_max", "max_speed"};
    for (const auto& [k, v] : l.physics) {
        if (!kKeys.count(k)) throw MalformedLayout("unknown pinball physics key '" + k + "'");
    }
    PinballPhysics p;
    p.dt = l.physics_or("dt", p.dt);
    p.drag = l.physics_or("drag", p.drag);
    p.restitution = l.physics_or("restitution", p.restitution);
    p.a_max = l.physics_or("a_max", p.a_max);
    p.max_speed = l.physics_or("max_speed", p.max_speed);
    if (!(p.dt > 0.0)) throw MalformedLayout("pinball dt must be positive");
    if (!(p.drag > 0.0 && p.drag <= 1.0)) throw MalformedLayout("pinball drag must lie in (0, 1]");
    if (!(p.restitution >= 0.0 && p.restitution <= 1.0)) {
        throw MalformedLayout("pinball restitution must lie in [0, 1]");
    }
    if (!(p.a_max > 0.0) || !(p.max_speed > 0.0)) throw MalformedLayout("pinball a_max and max_speed must be positive");
    return p;
}

std::vector<VariableSpec> pinball_space(const Layout& l, const PinballPhysics& p) {
    return {continuous_var("x", l.bounds.x0, l.bounds.x1), continuous_var("y", l.bounds.y0, l.bounds.y1),
            continuous_var("vx", -p.max_speed, p.max_speed), continuous_var("vy", -p.max_speed, p.max_speed)};
}

std::vector<ActionSchema> pinball_actions(const PinballPhysics& p) {
    std::vector<ActionSchema> out;
    for (const char* label : {"thrust-right", "thrust-left", "thrust-up", "thrust-down"}) {
        out.push_back({label, {continuous_var("a", 0.0, p.a_max)}});
    }
    out.push_back({"noop", {}});
    return out;
}

}  // namespace

PinballEnv::PinballEnv(Layout layout, int horizon, double gamma)
    : Env(pinball_space(require_layout(layout, "pinball"), read_physics(layout)),
          pinball_actions(read_physics(layout)), horizon, gamma),
      layout_(std::move(layout)),
      physics_(read_physics(layout_)) {
    for (const auto& poly : layout_.obstacles) {
        const auto edges = geom::polygon_edges(poly);
        blockers_.insert(blockers_.end(), edges.begin(), edges.end());
    }
    for (const auto& e : layout_.bounds.edges()) blockers_.push_back(e);
}

std::unique_ptr<Env> PinballEnv::clone() const { return std::make_unique<PinballEnv>(*this); }

FactoredState PinballEnv::initial_state(Rng&) { return {layout_.start->x, layout_.start->y, 0.0, 0.0}; }

Env::Transition PinballEnv::transition(const FactoredState& s, const GroundedAction& a, Rng&) {
    static constexpr geom::Vec2 kDirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    const auto& space = state_space();
    geom::Vec2 v{s[2], s[3]};
    if (a.action != kNoop) v = v + a.args[0] * kDirs[a.action];
    v = {clamp_to(space[2], v.x), clamp_to(space[3], v.y)};

    const geom::Vec2 p{s[0], s[1]};
    const geom::Vec2 d = physics_.dt * v;
    geom::Vec2 q = p + d;
    if (const auto hit = geom::first_hit(p, d, blockers_)) {
        q = geom::move_blocked(p, d, blockers_);
        const double vn = geom::dot(v, hit->normal);
        v = v - (1.0 + physics_.restitution) * vn * hit->normal;
    }
    v = physics_.drag * v;

    Transition t{{q.x, q.y, v.x, v.y}, false, false};
    t.goal = geom::segment_point_distance(p, q, layout_.hole->center) <= layout_.hole->radius;
    return t;
}

}  // namespace pearl
