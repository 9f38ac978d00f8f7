#include "pearl/learner/execute.hpp"

#include "pearl/core/error.hpp"

namespace pearl {

Segment execute_abstract(Env& env, const SpaCat& tree, AbstractAction action, Rng& rng,
                         int steps_left, const ExecuteOptions& options) {
    if (steps_left < 1) throw InvalidArgument("execute_abstract needs steps_left >= 1");
    const int leaf = tree.leaf_of(env.state());
    const auto& node = tree.node(leaf);
    if (action.action < 0 || static_cast<std::size_t>(action.action) >= node.apts.size() ||
        !node.apts[static_cast<std::size_t>(action.action)].is_leaf(action.apt_leaf)) {
        throw InvalidArgument("abstract action does not belong to the current state leaf");
    }
    const Apt& apt = node.apts[static_cast<std::size_t>(action.action)];

    Segment seg;
    seg.abstract.leaf = leaf;
    seg.abstract.action = action;
    seg.abstract.next_leaf = leaf;

    GroundedAction grounded{static_cast<std::size_t>(action.action), apt.sample(action.apt_leaf, rng)};
    double discount = 1.0;
    const double gamma = env.gamma();
    for (int step = 0; step < steps_left; ++step) {
        if (step > 0 && options.resample_each_step) grounded.args = apt.sample(action.apt_leaf, rng);
        FactoredState before = env.state();
        StepResult r = env.step(grounded);
        seg.abstract.reward += discount * r.reward;
        seg.reward_sum += r.reward;
        discount *= gamma;
        ++seg.abstract.step_count;
        const bool terminal = r.done && !r.truncated;
        seg.concrete.push_back({std::move(before), action, r.reward, r.next_state, terminal});

        const int next_leaf = tree.leaf_of(r.next_state);
        seg.abstract.next_leaf = next_leaf;
        if (r.done) {
            seg.abstract.done = terminal;
            seg.episode_done = true;
            seg.goal_reached = r.goal_reached;
            break;
        }
        if (next_leaf != leaf) break;
        if (options.redecide != nullptr && step + 1 < steps_left) {
            AbstractAction chosen = (*options.redecide)(leaf);
            if (chosen != action) {
                seg.next_action = chosen;
                break;
            }
        }
    }
    return seg;
}

}  // namespace pearl
