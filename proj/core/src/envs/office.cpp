#include "pearl/envs/office.hpp"

namespace pearl {

std::vector<ActionSchema> movement_actions() {
    std::vector<ActionSchema> out;
    for (const char* label : {"up", "down", "left", "right"}) {
        out.push_back({label, {continuous_var("d", 0.0, kMaxMove)}});
    }
    return out;
}

geom::Vec2 movement_displacement(std::size_t action, double d, double sigma, Rng& rng) {
    static constexpr geom::Vec2 kDirs[4] = {{0, 1}, {0, -1}, {-1, 0}, {1, 0}};
    const geom::Vec2 dir = kDirs[action];
    const geom::Vec2 orth{-dir.y, dir.x};
    const double noise = sigma > 0.0 ? rng.uniform(-sigma, sigma) : 0.0;
    return d * dir + noise * orth;
}

namespace {

std::vector<VariableSpec> office_space(const Layout& l) {
    return {continuous_var("x", l.bounds.x0, l.bounds.x1), continuous_var("y", l.bounds.y0, l.bounds.y1),
            discrete_var("c", 0, 2), discrete_var("m", 0, 2)};
}

}  // namespace

OfficeEnv::OfficeEnv(Layout layout, int horizon, double gamma)
    : Env(office_space(require_layout(layout, "office")), movement_actions(), horizon, gamma),
      layout_(std::move(layout)) {
    blockers_ = layout_.walls;
    for (const auto& e : layout_.bounds.edges()) blockers_.push_back(e);
    coffee_ = layout_.station("coffee")->area;
    mail_ = layout_.station("mail")->area;
    office_ = layout_.station("office")->area;
}

std::unique_ptr<Env> OfficeEnv::clone() const { return std::make_unique<OfficeEnv>(*this); }

FactoredState OfficeEnv::initial_state(Rng&) { return {layout_.start->x, layout_.start->y, 0.0, 0.0}; }

Env::Transition OfficeEnv::transition(const FactoredState& s, const GroundedAction& a, Rng& rng) {
    const geom::Vec2 p{s[0], s[1]};
    const geom::Vec2 q = geom::move_blocked(p, movement_displacement(a.action, a.args[0], layout_.noise_sigma, rng),
                                            blockers_);
    Transition t{{q.x, q.y, s[2], s[3]}, false, false};
    if (coffee_.contains(q)) t.next[2] = 1.0;
    if (mail_.contains(q)) t.next[3] = 1.0;
    t.goal = office_.contains(q) && t.next[2] == 1.0 && t.next[3] == 1.0;
    return t;
}

}  // namespace pearl
