#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pearl/abstraction/spacat.hpp"
#include "pearl/core/env.hpp"
#include "pearl/core/rng.hpp"
#include "pearl/learner/td.hpp"

namespace pearl {

/// Called before each further concrete step inside a segment; returns the
/// abstract action the policy would take at `leaf` now.
using Redecide = std::function<AbstractAction(int leaf)>;

struct ExecuteOptions {
    /// Draw fresh parameters from the APT leaf at every concrete step
    /// (otherwise once per segment).
    bool resample_each_step = true;
    /// When set, the segment also ends as soon as the policy picks a
    /// different abstract action inside the same leaf.
    const Redecide* redecide = nullptr;
};

struct Segment {
    AbstractTransition abstract;
    std::vector<ConcreteTransition> concrete;
    /// Undiscounted reward sum over the segment.
    double reward_sum = 0.0;
    bool episode_done = false;
    bool goal_reached = false;
    /// Action chosen by `redecide` that ended the segment, if any.
    std::optional<AbstractAction> next_action;
};

/// Runs `action` from the environment's current state until the abstract
/// state changes, the episode ends, or `steps_left` concrete steps are used.
Segment execute_abstract(Env& env, const SpaCat& tree, AbstractAction action, Rng& rng,
                         int steps_left, const ExecuteOptions& options = {});

}  // namespace pearl
