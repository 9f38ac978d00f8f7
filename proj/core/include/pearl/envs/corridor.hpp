#pragma once

#include "pearl/core/env.hpp"

namespace pearl {

/// One-dimensional oracle domain: x in [0, 1), move(d) with d in [0, 0.1)
/// adds d; the goal is x >= 0.9. Deterministic.
class CorridorEnv : public Env {
public:
    explicit CorridorEnv(int horizon = 15, double gamma = 0.99);

    [[nodiscard]] std::unique_ptr<Env> clone() const override;
    [[nodiscard]] std::string name() const override { return "corridor"; }

    static constexpr double kGoal = 0.9;
    static constexpr double kMaxStep = 0.1;

protected:
    FactoredState initial_state(Rng& rng) override;
    Transition transition(const FactoredState& s, const GroundedAction& a, Rng& rng) override;
};

}  // namespace pearl
