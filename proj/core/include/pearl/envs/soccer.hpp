#pragma once

#include "pearl/core/env.hpp"
#include "pearl/envs/layout.hpp"

namespace pearl {

struct SoccerPhysics {
    double goal_lo = 3.0;
    double goal_hi = 5.0;
    double keeper_x = 9.6;
    double keeper_speed = 0.12;
    double keeper_reach = 0.35;
    double kick_speed = 0.5;
    double shot_speed = 0.9;
    double kick_noise = 0.05;  ///< per unit of kick distance
    double shot_noise = 0.05;
};

/// Striker against a goalkeeper. State (agent x, y, ball x, y, keeper y).
/// The goal mouth is on the right edge of the field. The striker runs to the
/// ball after each kick.
class SoccerEnv : public Env {
public:
    explicit SoccerEnv(Layout layout, int horizon = 150, double gamma = 0.99);

    [[nodiscard]] std::unique_ptr<Env> clone() const override;
    [[nodiscard]] std::string name() const override { return "soccer"; }
    [[nodiscard]] const Layout& layout() const { return layout_; }
    [[nodiscard]] const SoccerPhysics& physics() const { return physics_; }

    static constexpr std::size_t kKickTo = 0;
    static constexpr std::size_t kShootLeft = 1;
    static constexpr std::size_t kShootRight = 2;

protected:
    FactoredState initial_state(Rng& rng) override;
    Transition transition(const FactoredState& s, const GroundedAction& a, Rng& rng) override;

private:
    Layout layout_;
    SoccerPhysics physics_;
};

}  // namespace pearl
