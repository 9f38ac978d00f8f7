#pragma once

#include <map>
#include <vector>

#include "pearl/abstraction/spacat.hpp"
#include "pearl/learner/qtable.hpp"
#include "pearl/learner/td.hpp"

namespace pearl {

/// Population standard deviation; 0 for fewer than two samples.
double population_sd(const std::vector<double>& values);

struct HeterogeneityTable {
    /// H(leaf, action) for every pair present in the abstract buffer.
    std::map<QKey, double> per_pair;
    /// H(leaf) = max over the pairs of that leaf.
    std::map<int, double> per_state;
    /// Diagnostics: dispersion of TD errors per pair, of value estimates per leaf.
    std::map<QKey, double> td_sd;
    std::map<int, double> value_sd;
};

/// H(s, a) = beta * SD[td errors of (s, a)] + (1 - beta) * SD[value
/// estimates of concrete states in s]. TD errors are recomputed against the
/// current Q. Each term is 0 when it has fewer than two samples.
HeterogeneityTable compute_heterogeneity(const QTable& q, const TraceBuffers& buffers,
                                         const SpaCat& tree, double beta, double gamma,
                                         SegmentDiscount discount = SegmentDiscount::once);

/// Same blend from precomputed dispersions; exposed for direct checks.
inline double blend_heterogeneity(double beta, double td_sd, double value_sd) {
    return beta * td_sd + (1.0 - beta) * value_sd;
}

struct StateTarget {
    int leaf = 0;
    double h = 0.0;
};

struct ActionTarget {
    int leaf = 0;
    int action = 0;
    int apt_leaf = 0;
    double h = 0.0;
};

struct RefinementPlan {
    std::vector<StateTarget> state_targets;
    std::vector<ActionTarget> action_targets;
    /// Next-ranked leaves, tried in order when a flexible target is skipped.
    std::vector<StateTarget> state_backups;

    [[nodiscard]] bool empty() const { return state_targets.empty() && action_targets.empty(); }
};

/// Top k_cap leaves by H(s) and top k_cap_actions pairs by H(s, a), H > 0
/// only, descending; ties by lower leaf id, then action, then APT leaf.
/// Up to `backups` further leaves are kept in ranking order.
RefinementPlan select_targets(const HeterogeneityTable& h, int k_cap, int k_cap_actions, int backups = 0);

struct SimilarityScores {
    /// Abstract action with the highest H at the leaf.
    AbstractAction focus;
    /// Positions in the concrete buffer of transitions starting in the leaf.
    std::vector<std::size_t> index;
    std::vector<double> td_estimate;
    std::vector<double> value;
    /// J = beta * td_estimate + (1 - beta) * value.
    std::vector<double> score;
};

/// Per-concrete-state similarity for the transitions that start in `leaf`.
/// The TD estimate subtracts Q at the executed abstract action; the value
/// estimate subtracts Q at the leaf's most heterogeneous action.
/// Throws InsufficientData with fewer than two transitions.
SimilarityScores similarity_scores(const QTable& q, const std::vector<ConcreteTransition>& concrete,
                                   const SpaCat& tree, int leaf, const HeterogeneityTable& h,
                                   double beta, double gamma);

}  // namespace pearl
