#include "pearl/core/env.hpp"

#include <sstream>

#include "pearl/core/error.hpp"

namespace pearl {

Env::Env(std::vector<VariableSpec> state_space, std::vector<ActionSchema> actions, int horizon,
         double gamma)
    : state_space_(std::move(state_space)),
      actions_(std::move(actions)),
      horizon_(horizon),
      gamma_(gamma) {
    if (state_space_.empty()) throw InvalidArgument("environment needs at least one state variable");
    if (actions_.empty()) throw InvalidArgument("environment needs at least one action");
    for (const auto& v : state_space_) v.validate();
    for (const auto& a : actions_) {
        for (const auto& p : a.params) p.validate();
    }
    set_horizon(horizon);
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in [0,1]");
}

void Env::set_horizon(int h) {
    if (h < 1) throw InvalidArgument("horizon must be positive");
    horizon_ = h;
}

FactoredState Env::reset(std::uint64_t seed) {
    rng_.seed(seed);
    state_ = initial_state(rng_);
    steps_ = 0;
    done_ = false;
    return state_;
}

void Env::check_action(const GroundedAction& a) const {
    if (a.action >= actions_.size()) {
        throw OutOfDomainAction("action index " + std::to_string(a.action) + " out of range");
    }
    const auto& schema = actions_[a.action];
    if (a.args.size() != schema.params.size()) {
        throw OutOfDomainAction("action '" + schema.label + "' expects " +
                                std::to_string(schema.params.size()) + " arguments");
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (!schema.params[i].contains(a.args[i])) {
            std::ostringstream os;
            os << "argument " << schema.params[i].name << "=" << a.args[i] << " of '"
               << schema.label << "' outside [" << schema.params[i].lo << ", "
               << schema.params[i].hi << ")";
            throw OutOfDomainAction(os.str());
        }
    }
}

StepResult Env::step(const GroundedAction& a) {
    if (done_) throw EpisodeFinished("step called after the episode ended");
    check_action(a);

    Transition t = transition(state_, a, rng_);
    for (std::size_t i = 0; i < state_space_.size(); ++i) {
        t.next[i] = clamp_to(state_space_[i], t.next[i]);
    }
    ++steps_;

    StepResult r;
    r.goal_reached = t.goal;
    r.reward = t.goal ? rewards_.goal_reward : rewards_.step_reward;
    r.truncated = !t.goal && !t.terminal && steps_ >= horizon_;
    r.done = t.goal || t.terminal || steps_ >= horizon_;
    state_ = std::move(t.next);
    r.next_state = state_;
    done_ = r.done;
    return r;
}

}  // namespace pearl
