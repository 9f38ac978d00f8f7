#include "pearl/learner/policy.hpp"

#include <algorithm>
#include <limits>

#include "pearl/core/error.hpp"

namespace pearl {

AbstractAction epsilon_greedy(const QTable& q, const SpaCat& tree, int leaf, double epsilon, Rng& rng) {
    const std::size_t total = count_abstract_actions(tree, leaf);
    if (total == 0) throw InvalidArgument("state leaf has no abstract actions");

    if (epsilon > 0.0 && rng.uniform() < epsilon) {
        std::size_t pick = rng.below(total);
        AbstractAction chosen;
        for_each_abstract_action(tree, leaf, [&](AbstractAction a) {
            if (pick-- == 0) chosen = a;
        });
        return chosen;
    }

    double best = -std::numeric_limits<double>::infinity();
    std::size_t ties = 0;
    for_each_abstract_action(tree, leaf, [&](AbstractAction a) {
        double v = q.get(leaf, a);
        if (v > best) {
            best = v;
            ties = 1;
        } else if (v == best) {
            ++ties;
        }
    });
    std::size_t pick = ties > 1 ? rng.below(ties) : 0;
    AbstractAction chosen;
    for_each_abstract_action(tree, leaf, [&](AbstractAction a) {
        if (q.get(leaf, a) == best && pick-- == 0) chosen = a;
    });
    return chosen;
}

AbstractAction greedy_first(const QTable& q, const SpaCat& tree, int leaf) {
    double best = -std::numeric_limits<double>::infinity();
    AbstractAction chosen;
    for_each_abstract_action(tree, leaf, [&](AbstractAction a) {
        double v = q.get(leaf, a);
        if (v > best) {
            best = v;
            chosen = a;
        }
    });
    return chosen;
}

void EpsilonSchedule::step() { epsilon = std::max(minimum, epsilon * decay); }

}  // namespace pearl
