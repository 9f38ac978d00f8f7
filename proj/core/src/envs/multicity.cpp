#include "pearl/envs/multicity.hpp"

#include "pearl/envs/office.hpp"

namespace pearl {

namespace {

std::vector<VariableSpec> multicity_space(const Layout& l) {
    return {discrete_var("city", 0, 3), continuous_var("x", l.bounds.x0, l.bounds.x1),
            continuous_var("y", l.bounds.y0, l.bounds.y1), discrete_var("has_package", 0, 2)};
}

std::vector<ActionSchema> multicity_actions() {
    auto out = movement_actions();
    out.push_back({"fly", {discrete_var("c", 0, 3)}});
    return out;
}

}  // namespace

MultiCityEnv::MultiCityEnv(Layout layout, int horizon, double gamma)
    : Env(multicity_space(require_layout(layout, "multicity")), multicity_actions(), horizon, gamma), layout_(std::move(layout)) {
    for (const auto& city : layout_.cities) {
        auto walls = layout_.walls;
        walls.insert(walls.end(), city.walls.begin(), city.walls.end());
        for (const auto& e : layout_.bounds.edges()) walls.push_back(e);
        blockers_.push_back(std::move(walls));
    }
    package_ = *layout_.station("package");
    destination_ = *layout_.station("destination");
}

std::unique_ptr<Env> MultiCityEnv::clone() const { return std::make_unique<MultiCityEnv>(*this); }

FactoredState MultiCityEnv::initial_state(Rng&) {
    return {0.0, layout_.start->x, layout_.start->y, 0.0};
}

Env::Transition MultiCityEnv::transition(const FactoredState& s, const GroundedAction& a, Rng& rng) {
    const int city = static_cast<int>(s[0]);
    geom::Vec2 p{s[1], s[2]};
    Transition t{s, false, false};
    if (a.action == kFly) {
        const auto& here = layout_.cities[static_cast<std::size_t>(city)].airport;
        if (!here.contains(p)) return t;
        const int to = static_cast<int>(a.args[0]);
        p = layout_.cities[static_cast<std::size_t>(to)].airport.center();
        t.next = {static_cast<double>(to), p.x, p.y, s[3]};
    } else {
        p = geom::move_blocked(p, movement_displacement(a.action, a.args[0], layout_.noise_sigma, rng),
                               blockers_[static_cast<std::size_t>(city)]);
        t.next[1] = p.x;
        t.next[2] = p.y;
        if (city == package_.city && package_.area.contains(p)) t.next[3] = 1.0;
    }
    const int now = static_cast<int>(t.next[0]);
    t.goal = t.next[3] == 1.0 && now == destination_.city && destination_.area.contains(p);
    return t;
}

}  // namespace pearl
