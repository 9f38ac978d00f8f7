#pragma once

#include "pearl/core/env.hpp"
#include "pearl/envs/layout.hpp"

namespace pearl {

struct PinballPhysics {
    double dt = 1.0;
    double drag = 0.995;
    double restitution = 0.95;
    double a_max = 0.2;
    double max_speed = 1.0;
};

/// Point ball among polygonal obstacles. State (x, y, vx, vy). Four thrust
/// actions with magnitude in [0, a_max) and a no-op. Reaching the hole wins.
class PinballEnv : public Env {
public:
    explicit PinballEnv(Layout layout, int horizon = 600, double gamma = 0.999);

    [[nodiscard]] std::unique_ptr<Env> clone() const override;
    [[nodiscard]] std::string name() const override { return "pinball"; }
    [[nodiscard]] const Layout& layout() const { return layout_; }
    [[nodiscard]] const PinballPhysics& physics() const { return physics_; }

    static constexpr std::size_t kNoop = 4;

protected:
    FactoredState initial_state(Rng& rng) override;
    Transition transition(const FactoredState& s, const GroundedAction& a, Rng& rng) override;

private:
    Layout layout_;
    PinballPhysics physics_;
    std::vector<geom::Segment> blockers_;
};

}  // namespace pearl
