#pragma once

#include "pearl/core/env.hpp"
#include "pearl/envs/layout.hpp"

namespace pearl {

/// Step length bound shared by the navigation domains: d in [0, 0.5).
inline constexpr double kMaxMove = 0.5;

/// Movement actions up/down/left/right, each with one distance parameter.
std::vector<ActionSchema> movement_actions();

/// Displacement for movement action `action` with distance d, plus noise
/// drawn uniformly in [-sigma, sigma] along the orthogonal axis.
geom::Vec2 movement_displacement(std::size_t action, double d, double sigma, Rng& rng);

/// Continuous OfficeWorld: collect coffee and mail, then reach the office.
/// State (x, y, c, m).
class OfficeEnv : public Env {
public:
    explicit OfficeEnv(Layout layout, int horizon = 400, double gamma = 0.99);

    [[nodiscard]] std::unique_ptr<Env> clone() const override;
    [[nodiscard]] std::string name() const override { return "office"; }
    [[nodiscard]] const Layout& layout() const { return layout_; }

protected:
    FactoredState initial_state(Rng& rng) override;
    Transition transition(const FactoredState& s, const GroundedAction& a, Rng& rng) override;

private:
    Layout layout_;
    std::vector<geom::Segment> blockers_;
    geom::Rect coffee_;
    geom::Rect mail_;
    geom::Rect office_;
};

}  // namespace pearl
