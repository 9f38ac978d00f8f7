#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pearl/core/rng.hpp"
#include "pearl/core/types.hpp"

namespace pearl {

struct RewardSpec {
    double goal_reward = 1.0;
    double step_reward = 0.0;
};

/// Episodic goal-oriented environment with parameterized actions.
///
/// The base class owns the episode bookkeeping (step counting, horizon
/// termination, action validation, reward assignment, bounds clamping).
/// Concrete environments only provide the initial state and the raw
/// transition.
class Env {
public:
    virtual ~Env() = default;

    [[nodiscard]] const std::vector<VariableSpec>& state_space() const { return state_space_; }
    [[nodiscard]] const std::vector<ActionSchema>& actions() const { return actions_; }
    [[nodiscard]] int horizon() const { return horizon_; }
    [[nodiscard]] double gamma() const { return gamma_; }
    [[nodiscard]] const RewardSpec& rewards() const { return rewards_; }

    /// Reseeds the internal stream and returns the initial state.
    FactoredState reset(std::uint64_t seed);

    /// Advances one step. Throws OutOfDomainAction or EpisodeFinished.
    StepResult step(const GroundedAction& a);

    [[nodiscard]] const FactoredState& state() const { return state_; }
    [[nodiscard]] int steps_taken() const { return steps_; }
    [[nodiscard]] bool done() const { return done_; }

    /// Throws OutOfDomainAction when `a` does not match its schema.
    void check_action(const GroundedAction& a) const;

    [[nodiscard]] virtual std::unique_ptr<Env> clone() const = 0;
    [[nodiscard]] virtual std::string name() const = 0;

    /// Overrides the per-environment horizon (used by evaluation tooling).
    void set_horizon(int h);
    void set_gamma(double g) { gamma_ = g; }
    void set_rewards(RewardSpec r) { rewards_ = r; }

protected:
    struct Transition {
        FactoredState next;
        bool goal = false;
        /// Non-goal terminal event (e.g. ball captured).
        bool terminal = false;
    };

    Env(std::vector<VariableSpec> state_space, std::vector<ActionSchema> actions,
        int horizon, double gamma);
    Env(const Env&) = default;
    Env& operator=(const Env&) = default;

    virtual FactoredState initial_state(Rng& rng) = 0;
    virtual Transition transition(const FactoredState& s, const GroundedAction& a, Rng& rng) = 0;

private:
    std::vector<VariableSpec> state_space_;
    std::vector<ActionSchema> actions_;
    int horizon_;
    double gamma_;
    RewardSpec rewards_;

    Rng rng_;
    FactoredState state_;
    int steps_ = 0;
    bool done_ = true;
};

}  // namespace pearl
