#include "pearl/refinement/heterogeneity.hpp"

#include <algorithm>
#include <cmath>

#include "pearl/core/error.hpp"

namespace pearl {

double population_sd(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size()));
}

HeterogeneityTable compute_heterogeneity(const QTable& q, const TraceBuffers& buffers,
                                         const SpaCat& tree, double beta, double gamma,
                                         SegmentDiscount discount) {
    std::map<QKey, std::vector<double>> deltas;
    for (const auto& t : buffers.abstract_buf) {
        deltas[QKey{t.leaf, t.action}].push_back(td_error(q, tree, t, gamma, discount));
    }
    std::map<int, std::vector<double>> values;
    for (const auto& t : buffers.concrete_buf) {
        values[tree.leaf_of(t.state)].push_back(value_estimate(q, t, tree, gamma));
    }

    HeterogeneityTable out;
    for (const auto& [leaf, v] : values) out.value_sd[leaf] = population_sd(v);
    for (const auto& [key, d] : deltas) {
        const double sd_td = population_sd(d);
        out.td_sd[key] = sd_td;
        auto it = out.value_sd.find(key.leaf);
        const double sd_v = it == out.value_sd.end() ? 0.0 : it->second;
        const double h = std::max(0.0, blend_heterogeneity(beta, sd_td, sd_v));
        out.per_pair[key] = h;
        auto [pos, inserted] = out.per_state.emplace(key.leaf, h);
        if (!inserted) pos->second = std::max(pos->second, h);
    }
    return out;
}

RefinementPlan select_targets(const HeterogeneityTable& h, int k_cap, int k_cap_actions, int backups) {
    RefinementPlan plan;
    for (const auto& [leaf, v] : h.per_state) {
        if (v > 0.0) plan.state_targets.push_back({leaf, v});
    }
    // std::map iteration is already in (leaf, action, apt) order, so a stable
    // sort on H alone yields the tie rule.
    std::stable_sort(plan.state_targets.begin(), plan.state_targets.end(),
                     [](const StateTarget& a, const StateTarget& b) { return a.h > b.h; });
    const auto keep = static_cast<std::size_t>(std::max(0, k_cap));
    if (plan.state_targets.size() > keep) {
        const auto end = std::min(plan.state_targets.size(), keep + static_cast<std::size_t>(std::max(0, backups)));
        plan.state_backups.assign(plan.state_targets.begin() + static_cast<std::ptrdiff_t>(keep),
                                  plan.state_targets.begin() + static_cast<std::ptrdiff_t>(end));
        plan.state_targets.resize(keep);
    }

    for (const auto& [key, v] : h.per_pair) {
        if (v > 0.0) plan.action_targets.push_back({key.leaf, key.action, key.apt_leaf, v});
    }
    std::stable_sort(plan.action_targets.begin(), plan.action_targets.end(),
                     [](const ActionTarget& a, const ActionTarget& b) { return a.h > b.h; });
    if (plan.action_targets.size() > static_cast<std::size_t>(std::max(0, k_cap_actions))) {
        plan.action_targets.resize(static_cast<std::size_t>(std::max(0, k_cap_actions)));
    }
    return plan;
}

SimilarityScores similarity_scores(const QTable& q, const std::vector<ConcreteTransition>& concrete,
                                   const SpaCat& tree, int leaf, const HeterogeneityTable& h,
                                   double beta, double gamma) {
    SimilarityScores out;
    for (std::size_t i = 0; i < concrete.size(); ++i) {
        if (tree.leaf_of(concrete[i].state) == leaf) out.index.push_back(i);
    }
    if (out.index.size() < 2) {
        throw InsufficientData("leaf " + std::to_string(leaf) + " has " +
                               std::to_string(out.index.size()) + " concrete transitions");
    }

    bool found = false;
    double best = 0.0;
    for (auto it = h.per_pair.lower_bound(QKey{leaf, 0, 0});
         it != h.per_pair.end() && it->first.leaf == leaf; ++it) {
        if (!found || it->second > best) {
            best = it->second;
            out.focus = it->first.abstract_action();
            found = true;
        }
    }
    if (!found) out.focus = concrete[out.index.front()].action;

    out.td_estimate.reserve(out.index.size());
    out.value.reserve(out.index.size());
    out.score.reserve(out.index.size());
    for (std::size_t i : out.index) {
        const auto& t = concrete[i];
        const double d = value_estimate(q, t, tree, gamma);
        const double v = value_estimate_at(q, t, tree, gamma, out.focus);
        out.td_estimate.push_back(d);
        out.value.push_back(v);
        out.score.push_back(beta * d + (1.0 - beta) * v);
    }
    return out;
}

}  // namespace pearl
