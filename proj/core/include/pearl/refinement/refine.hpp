#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pearl/abstraction/spacat.hpp"
#include "pearl/learner/qtable.hpp"
#include "pearl/learner/td.hpp"
#include "pearl/refinement/beta.hpp"
#include "pearl/refinement/heterogeneity.hpp"
#include "pearl/statlearn/cluster.hpp"
#include "pearl/statlearn/svm.hpp"

namespace pearl {

enum class RefinementMode { uniform, flexible };

RefinementMode parse_refinement_mode(const std::string& s);
const char* to_string(RefinementMode m);

/// What the clustering step sees for each concrete state.
enum class ClusterFeatures { score, state_and_score };

struct RefinementParams {
    RefinementMode mode = RefinementMode::flexible;
    int k_cap = 2;
    int k_cap_actions = 3;
    int max_clusters = 3;
    int variables_to_split = 2;
    statlearn::KernelChoice kernel = statlearn::KernelChoice::linear;
    statlearn::Linkage linkage = statlearn::Linkage::ward;
    ClusterFeatures cluster_features = ClusterFeatures::score;
    double cluster_start = 0.1;
    double cluster_step = 0.001;
    std::vector<double> candidate_Cs{0.1, 1.0, 10.0, 100.0};
    /// Cap on concrete states fed to clustering and the classifier; larger
    /// sets are subsampled deterministically.
    std::size_t max_cluster_points = 1200;
    /// Flexible mode: how many next-ranked leaves may stand in for targets
    /// skipped with a single cluster or too little data.
    int backfill = 0;
    /// Flexible mode: leaves with fewer concrete transitions are skipped.
    int min_samples = 2;
    SegmentDiscount segment_discount = SegmentDiscount::once;
    std::uint64_t seed = 0;
};

struct StateOutcome {
    int leaf = 0;
    double h = 0.0;
    std::string status;  ///< "refined" or the reason it was skipped
    int clusters = 0;
    double threshold_used = 0.0;
    int samples = 0;
    std::vector<int> children;
};

struct ActionOutcome {
    ActionTarget target;
    std::string status;
    std::vector<int> children;
};

/// One record of the refinement log.
struct PhaseReport {
    int phase = 0;
    double beta = 0.0;
    double similarity_beta = 0.0;
    std::size_t abstract_samples = 0;
    std::size_t concrete_samples = 0;
    std::vector<StateOutcome> states;
    std::vector<ActionOutcome> actions;
    std::size_t leaves_before = 0;
    std::size_t leaves_after = 0;
    std::size_t apt_leaves_before = 0;
    std::size_t apt_leaves_after = 0;
};

nlohmann::json to_json(const PhaseReport& r);

/// Children of a refined state leaf inherit the parent's rows; parent rows
/// are removed.
void migrate_q_state(QTable& q, int parent, const std::vector<int>& children);

/// Child APT leaves inherit the parent APT leaf's row at `leaf`.
void migrate_q_apt(QTable& q, int leaf, int action, int parent_apt, const std::vector<int>& children);

/// Applies a plan: APT targets first (uniform bisection), then state targets
/// by the configured mode. Failures on one target are recorded and skipped.
/// Steps both beta schedules once.
PhaseReport refine_step(SpaCat& tree, QTable& q, const TraceBuffers& buffers,
                        const RefinementPlan& plan, const HeterogeneityTable& h,
                        const RefinementParams& params, BetaSchedule& h_beta,
                        BetaSchedule& similarity_beta, double gamma);

/// compute_heterogeneity + select_targets + refine_step.
PhaseReport refine_phase(SpaCat& tree, QTable& q, const TraceBuffers& buffers,
                         const RefinementParams& params, BetaSchedule& h_beta,
                         BetaSchedule& similarity_beta, double gamma, int phase);

}  // namespace pearl
