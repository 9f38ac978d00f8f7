#include "pearl/envs/corridor.hpp"

namespace pearl {

CorridorEnv::CorridorEnv(int horizon, double gamma)
    : Env({continuous_var("x", 0.0, 1.0)}, {{"move", {continuous_var("d", 0.0, kMaxStep)}}}, horizon, gamma) {}

std::unique_ptr<Env> CorridorEnv::clone() const { return std::make_unique<CorridorEnv>(*this); }

FactoredState CorridorEnv::initial_state(Rng&) { return {0.0}; }

Env::Transition CorridorEnv::transition(const FactoredState& s, const GroundedAction& a, Rng&) {
    const double x = s[0] + a.args[0];
    return {{x}, x >= kGoal, false};
}

}  // namespace pearl
