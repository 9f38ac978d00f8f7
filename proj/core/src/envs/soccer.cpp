#include "pearl/envs/soccer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pearl/core/error.hpp"

namespace pearl {

namespace {

SoccerPhysics read_physics(const Layout& l) {
    static const std::set<std::string> kKeys{"goal_lo",    "goal_hi",    "keeper_x",   "keeper_speed", "keeper_reach",
                                             "kick_speed", "shot_speed", "kick_noise", "shot_noise"};
    for (const auto& [k, v] : l.physics) {
        if (!kKeys.count(k)) throw MalformedLayout("unknown soccer physics key '" + k + "'");
    }
    SoccerPhysics p;
    p.goal_lo = l.physics_or("goal_lo", p.goal_lo);
    p.goal_hi = l.physics_or("goal_hi", p.goal_hi);
    p.keeper_x = l.physics_or("keeper_x", p.keeper_x);
    p.keeper_speed = l.physics_or("keeper_speed", p.keeper_speed);
    p.keeper_reach = l.physics_or("keeper_reach", p.keeper_reach);
    p.kick_speed = l.physics_or("kick_speed", p.kick_speed);
    p.shot_speed = l.physics_or("shot_speed", p.shot_speed);
    p.kick_noise = l.physics_or("kick_noise", p.kick_noise);
    p.shot_noise = l.physics_or("shot_noise", p.shot_noise);
    const auto& b = l.bounds;
    if (!(p.goal_lo >= b.y0 && p.goal_lo < p.goal_hi && p.goal_hi <= b.y1)) {
        throw MalformedLayout("soccer goal mouth must lie inside the field");
    }
    if (!(p.keeper_x > b.x0 && p.keeper_x < b.x1)) throw MalformedLayout("soccer keeper_x must lie inside the field");
    if (!(p.kick_speed > 0.0 && p.shot_speed > 0.0)) throw MalformedLayout("soccer ball speeds must be positive");
    if (p.keeper_speed < 0.0 || p.keeper_reach < 0.0 || p.kick_noise < 0.0 || p.shot_noise < 0.0) {
        throw MalformedLayout("soccer keeper and noise constants must be non-negative");
    }
    return p;
}

std::vector<VariableSpec> soccer_space(const Layout& l) {
    const auto& b = l.bounds;
    return {continuous_var("agent_x", b.x0, b.x1), continuous_var("agent_y", b.y0, b.y1),
            continuous_var("ball_x", b.x0, b.x1),  continuous_var("ball_y", b.y0, b.y1),
            continuous_var("keeper_y", b.y0, b.y1)};
}

std::vector<ActionSchema> soccer_actions(const Layout& l, const SoccerPhysics& p) {
    const auto& b = l.bounds;
    const double mid = 0.5 * (p.goal_lo + p.goal_hi);
    return {{"kick-to", {continuous_var("x", b.x0, b.x1), continuous_var("y", b.y0, b.y1)}},
            {"shoot-left", {continuous_var("y", p.goal_lo, mid)}},
            {"shoot-right", {continuous_var("y", mid, p.goal_hi)}}};
}

}  // namespace

SoccerEnv::SoccerEnv(Layout layout, int horizon, double gamma)
    : Env(soccer_space(require_layout(layout, "soccer")), soccer_actions(layout, read_physics(layout)), horizon,
          gamma),
      layout_(std::move(layout)),
      physics_(read_physics(layout_)) {}

std::unique_ptr<Env> SoccerEnv::clone() const { return std::make_unique<SoccerEnv>(*this); }

FactoredState SoccerEnv::initial_state(Rng& rng) {
    const auto& b = layout_.bounds;
    const double w = b.x1 - b.x0;
    const double h = b.y1 - b.y0;
    const double x = rng.uniform(b.x0 + 0.1 * w, b.x0 + 0.3 * w);
    const double y = rng.uniform(b.y0 + 0.25 * h, b.y0 + 0.75 * h);
    return {x, y, x, y, 0.5 * (physics_.goal_lo + physics_.goal_hi)};
}

Env::Transition SoccerEnv::transition(const FactoredState& s, const GroundedAction& a, Rng& rng) {
    const auto& b = layout_.bounds;
    const auto& ph = physics_;
    geom::Vec2 ball{s[2], s[3]};
    double keeper = s[4];

    geom::Vec2 target;
    double speed = ph.kick_speed;
    bool shot = a.action != kKickTo;
    if (!shot) {
        target = {a.args[0], a.args[1]};
        const double spread = ph.kick_noise * geom::norm(target - ball);
        if (spread > 0.0) target = target + geom::Vec2{rng.uniform(-spread, spread), rng.uniform(-spread, spread)};
    } else {
        target = {b.x1 + 1.0, a.args[0]};
        const double spread = ph.shot_noise * geom::norm(target - ball);
        if (spread > 0.0) target.y += rng.uniform(-spread, spread);
        speed = ph.shot_speed;
    }

    Transition t{s, false, false};
    constexpr int kMaxTicks = 1000;
    for (int tick = 0; tick < kMaxTicks; ++tick) {
        const geom::Vec2 rem = target - ball;
        const double dist = geom::norm(rem);
        const bool arrives = dist <= speed;
        const geom::Vec2 next = arrives ? target : ball + (speed / dist) * rem;

        // Keeper heads for the point where the ball's path meets its line.
        const geom::Vec2 dir = next - ball;
        double aim = next.y;
        if (dir.x > 1e-12 && ball.x < ph.keeper_x) aim = ball.y + (ph.keeper_x - ball.x) * dir.y / dir.x;
        aim = std::clamp(aim, b.y0, b.y1);
        keeper += std::clamp(aim - keeper, -ph.keeper_speed, ph.keeper_speed);

        if (geom::segment_point_distance(ball, next, {ph.keeper_x, keeper}) <= ph.keeper_reach) {
            t.next = {ph.keeper_x, keeper, ph.keeper_x, keeper, keeper};
            t.terminal = true;
            return t;
        }
        if (next.x >= b.x1) {
            const double cross_y = dir.x > 0.0 ? ball.y + (b.x1 - ball.x) * dir.y / dir.x : next.y;
            t.goal = cross_y >= ph.goal_lo && cross_y <= ph.goal_hi;
            t.terminal = !t.goal;
            t.next = {next.x, next.y, next.x, next.y, keeper};
            return t;
        }
        if (next.x < b.x0 || next.y < b.y0 || next.y >= b.y1) {
            t.terminal = true;
            t.next = {next.x, next.y, next.x, next.y, keeper};
            return t;
        }
        ball = next;
        if (arrives) break;
    }
    t.next = {ball.x, ball.y, ball.x, ball.y, keeper};
    return t;
}

}  // namespace pearl
