#include "pearl/learner/td.hpp"

#include <algorithm>
#include <cmath>

#include "pearl/core/error.hpp"

namespace pearl {

void EligibilityTraces::replace(const QKey& k) {
    for (auto& [key, e] : entries_) {
        if (key == k) {
            e = 1.0;
            return;
        }
    }
    entries_.emplace_back(k, 1.0);
}

double EligibilityTraces::get(const QKey& k) const {
    for (const auto& [key, e] : entries_) {
        if (key == k) return e;
    }
    return 0.0;
}

void EligibilityTraces::apply(QTable& q, double step, double decay) {
    for (auto& [key, e] : entries_) {
        q.add(key, step * e);
        e *= decay;
    }
    std::erase_if(entries_, [](const auto& entry) { return entry.second < kCutoff; });
}

SegmentDiscount parse_segment_discount(const std::string& s) {
    if (s == "once") return SegmentDiscount::once;
    if (s == "per_step") return SegmentDiscount::per_step;
    throw InvalidArgument("unknown segment discount '" + s + "'");
}

const char* to_string(SegmentDiscount d) {
    return d == SegmentDiscount::once ? "once" : "per_step";
}

double td_error(const QTable& q, const SpaCat& tree, const AbstractTransition& t, double gamma,
                SegmentDiscount discount) {
    if (t.done) return t.reward - q.get(t.leaf, t.action);
    const double g = discount == SegmentDiscount::once ? gamma : std::pow(gamma, t.step_count);
    const double bootstrap = g * q.max_at(tree, t.next_leaf);
    return (t.reward + bootstrap) - q.get(t.leaf, t.action);
}

double value_estimate_at(const QTable& q, const ConcreteTransition& t, const SpaCat& tree,
                         double gamma, AbstractAction action) {
    const double bootstrap = t.done ? 0.0 : gamma * q.max_at(tree, tree.leaf_of(t.next_state));
    return t.reward + bootstrap - q.get(tree.leaf_of(t.state), action);
}

double value_estimate(const QTable& q, const ConcreteTransition& t, const SpaCat& tree, double gamma) {
    return value_estimate_at(q, t, tree, gamma, t.action);
}

double td_lambda_update(QTable& q, EligibilityTraces& traces, const SpaCat& tree,
                        const AbstractTransition& t, double alpha, double gamma, double lambda,
                        SegmentDiscount discount) {
    const double delta = td_error(q, tree, t, gamma, discount);
    traces.replace(QKey{t.leaf, t.action});
    traces.apply(q, alpha * delta, gamma * lambda);
    return delta;
}

}  // namespace pearl
