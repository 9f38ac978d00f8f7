#pragma once

#include <algorithm>

namespace pearl {

/// Linearly annealed blend weight: beta = clamp(initial - decay * n, 0, 1)
/// after n refinement phases.
struct BetaSchedule {
    double initial = 1.0;
    double decay = 0.02;
    int refinements_done = 0;
    double beta = 1.0;

    static BetaSchedule make(double initial, double decay) {
        BetaSchedule s{initial, decay, 0, 0.0};
        s.beta = s.value_at(0);
        return s;
    }

    [[nodiscard]] double value_at(int n) const {
        return std::clamp(initial - decay * static_cast<double>(n), 0.0, 1.0);
    }
};

inline BetaSchedule beta_step(BetaSchedule s) {
    ++s.refinements_done;
    s.beta = s.value_at(s.refinements_done);
    return s;
}

}  // namespace pearl
