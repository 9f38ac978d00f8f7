#pragma once

#include "pearl/core/env.hpp"
#include "pearl/envs/layout.hpp"

namespace pearl {

/// Three cities, each with an airport. The agent walks as in OfficeWorld,
/// picks up the package and flies it to the destination airport.
/// State (city, x, y, has_package); actions up/down/left/right(d), fly(c).
class MultiCityEnv : public Env {
public:
    explicit MultiCityEnv(Layout layout, int horizon = 400, double gamma = 0.99);

    [[nodiscard]] std::unique_ptr<Env> clone() const override;
    [[nodiscard]] std::string name() const override { return "multicity"; }
    [[nodiscard]] const Layout& layout() const { return layout_; }

    static constexpr std::size_t kFly = 4;

protected:
    FactoredState initial_state(Rng& rng) override;
    Transition transition(const FactoredState& s, const GroundedAction& a, Rng& rng) override;

private:
    Layout layout_;
    std::vector<std::vector<geom::Segment>> blockers_;  ///< per city
    Station package_;
    Station destination_;
};

}  // namespace pearl
