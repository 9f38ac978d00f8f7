#pragma once

#include "pearl/abstraction/spacat.hpp"
#include "pearl/core/rng.hpp"
#include "pearl/learner/qtable.hpp"

namespace pearl {

/// With probability epsilon a uniformly random (action, APT leaf) pair at
/// `leaf`; otherwise an argmax of Q with ties broken uniformly at random.
AbstractAction epsilon_greedy(const QTable& q, const SpaCat& tree, int leaf, double epsilon, Rng& rng);

/// Deterministic argmax (ties by lowest action, then lowest APT leaf).
AbstractAction greedy_first(const QTable& q, const SpaCat& tree, int leaf);

struct EpsilonSchedule {
    double epsilon = 1.0;
    double decay = 0.9989;
    double minimum = 0.05;

    /// Multiplicative per-episode decay, floored at `minimum`.
    void step();
};

}  // namespace pearl
