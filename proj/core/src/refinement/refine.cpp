#include "pearl/refinement/refine.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "pearl/core/error.hpp"
#include "pearl/core/rng.hpp"

namespace pearl {

RefinementMode parse_refinement_mode(const std::string& s) {
    if (s == "uniform") return RefinementMode::uniform;
    if (s == "flexible") return RefinementMode::flexible;
    throw ConfigError("unknown refinement mode '" + s + "'");
}

const char* to_string(RefinementMode m) {
    return m == RefinementMode::uniform ? "uniform" : "flexible";
}

void migrate_q_state(QTable& q, int parent, const std::vector<int>& children) {
    const auto rows = q.rows_at(parent);
    for (const auto& [key, value] : rows) {
        for (int c : children) q.set(QKey{c, key.action, key.apt_leaf}, value);
        q.erase(key);
    }
}

void migrate_q_apt(QTable& q, int leaf, int action, int parent_apt, const std::vector<int>& children) {
    const QKey parent{leaf, action, parent_apt};
    if (!q.contains(parent)) return;
    const double value = q.get(parent);
    for (int c : children) q.set(QKey{leaf, action, c}, value);
    q.erase(parent);
}

namespace {

std::vector<std::size_t> subsample(std::size_t n, std::size_t cap, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (cap == 0 || n <= cap) return idx;
    Rng rng(seed);
    for (std::size_t i = 0; i < cap; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    return idx;
}

void refine_action(SpaCat& tree, QTable& q, const ActionTarget& t, ActionOutcome& out) {
    if (!tree.is_leaf(t.leaf)) {
        out.status = "skipped: state leaf no longer live";
        return;
    }
    Apt& apt = tree.apt(t.leaf, static_cast<std::size_t>(t.action));
    if (!apt.is_leaf(t.apt_leaf)) {
        out.status = "skipped: apt leaf no longer live";
        return;
    }
    if (!apt.can_split(t.apt_leaf)) {
        out.status = "skipped: apt leaf at minimum width";
        return;
    }
    out.children = apt.refine_uniform(t.apt_leaf);
    migrate_q_apt(q, t.leaf, t.action, t.apt_leaf, out.children);
    out.status = "refined";
}

void refine_state_flexible(SpaCat& tree, QTable& q, const TraceBuffers& buffers,
                           const HeterogeneityTable& h, const RefinementParams& params,
                           double similarity_beta, double gamma, int phase, StateOutcome& out) {
    SimilarityScores sim;
    try {
        sim = similarity_scores(q, buffers.concrete_buf, tree, out.leaf, h, similarity_beta, gamma);
    } catch (const InsufficientData&) {
        out.status = "skipped: insufficient data";
        out.samples = static_cast<int>(sim.index.size());
        return;
    }
    if (sim.index.size() < static_cast<std::size_t>(params.min_samples)) {
        out.status = "skipped: insufficient data";
        out.samples = static_cast<int>(sim.index.size());
        return;
    }

    const auto pick = subsample(sim.index.size(), params.max_cluster_points,
                                mix_seed(mix_seed(params.seed, static_cast<std::uint64_t>(out.leaf)),
                                         static_cast<std::uint64_t>(phase)));
    out.samples = static_cast<int>(pick.size());

    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> features;
    states.reserve(pick.size());
    features.reserve(pick.size());
    for (std::size_t p : pick) {
        const auto& s = buffers.concrete_buf[sim.index[p]].state;
        states.push_back(s);
        if (params.cluster_features == ClusterFeatures::score) {
            features.push_back({sim.score[p]});
        } else {
            auto f = s;
            f.push_back(sim.score[p]);
            features.push_back(std::move(f));
        }
    }

    const auto clusters = statlearn::adaptive_cluster(features, params.max_clusters, params.cluster_start,
                                                      params.cluster_step, params.linkage);
    out.clusters = clusters.n_clusters;
    out.threshold_used = clusters.threshold_used;
    if (clusters.n_clusters < 2) {
        out.status = "skipped: single cluster";
        return;
    }

    statlearn::SvmOptions opts;
    opts.kernel = params.kernel;
    opts.candidate_Cs = params.candidate_Cs;
    opts.seed = mix_seed(params.seed, 0x5eed);
    std::shared_ptr<const statlearn::ClassifierModel> model;
    try {
        model = std::make_shared<statlearn::ClassifierModel>(
            statlearn::svm_train_fit(states, clusters.labels, opts).model);
        out.children = tree.refine_flexible(out.leaf, model, static_cast<int>(model->classes.size()), states);
    } catch (const Error& e) {
        out.status = std::string("skipped: ") + e.what();
        return;
    }
    migrate_q_state(q, out.leaf, out.children);
    out.status = "refined";
}

}  // namespace

PhaseReport refine_step(SpaCat& tree, QTable& q, const TraceBuffers& buffers,
                        const RefinementPlan& plan, const HeterogeneityTable& h,
                        const RefinementParams& params, BetaSchedule& h_beta,
                        BetaSchedule& similarity_beta, double gamma) {
    PhaseReport report;
    report.phase = h_beta.refinements_done;
    report.beta = h_beta.beta;
    report.similarity_beta = similarity_beta.beta;
    report.abstract_samples = buffers.abstract_buf.size();
    report.concrete_samples = buffers.concrete_buf.size();
    report.leaves_before = tree.num_leaves();
    report.apt_leaves_before = tree.total_apt_leaves();

    for (const auto& t : plan.action_targets) {
        ActionOutcome out;
        out.target = t;
        refine_action(tree, q, t, out);
        report.actions.push_back(std::move(out));
    }

    std::size_t next_backup = 0;
    auto targets = plan.state_targets;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto t = targets[i];
        StateOutcome out;
        out.leaf = t.leaf;
        out.h = t.h;
        if (!tree.is_leaf(t.leaf)) {
            out.status = "skipped: leaf no longer live";
        } else if (params.mode == RefinementMode::uniform) {
            try {
                out.children = tree.refine_uniform(t.leaf, params.variables_to_split);
                migrate_q_state(q, t.leaf, out.children);
                out.status = "refined";
            } catch (const UnsplittableLeaf& e) {
                out.status = std::string("skipped: ") + e.what();
            }
        } else {
            refine_state_flexible(tree, q, buffers, h, params, similarity_beta.beta, gamma,
                                  report.phase, out);
            if (out.status != "refined" && next_backup < plan.state_backups.size()) {
                targets.push_back(plan.state_backups[next_backup++]);
            }
        }
        report.states.push_back(std::move(out));
    }

    report.leaves_after = tree.num_leaves();
    report.apt_leaves_after = tree.total_apt_leaves();
    h_beta = beta_step(h_beta);
    similarity_beta = beta_step(similarity_beta);
    return report;
}

PhaseReport refine_phase(SpaCat& tree, QTable& q, const TraceBuffers& buffers,
                         const RefinementParams& params, BetaSchedule& h_beta,
                         BetaSchedule& similarity_beta, double gamma, int phase) {
    const auto h = compute_heterogeneity(q, buffers, tree, h_beta.beta, gamma, params.segment_discount);
    const int backups = params.mode == RefinementMode::flexible ? params.backfill : 0;
    const auto plan = select_targets(h, params.k_cap, params.k_cap_actions, backups);
    auto report = refine_step(tree, q, buffers, plan, h, params, h_beta, similarity_beta, gamma);
    report.phase = phase;
    return report;
}

nlohmann::json to_json(const PhaseReport& r) {
    nlohmann::json states = nlohmann::json::array();
    for (const auto& s : r.states) {
        states.push_back({{"leaf", s.leaf},
                          {"h", s.h},
                          {"status", s.status},
                          {"clusters", s.clusters},
                          {"threshold_used", s.threshold_used},
                          {"samples", s.samples},
                          {"children", s.children}});
    }
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& a : r.actions) {
        actions.push_back({{"leaf", a.target.leaf},
                           {"action", a.target.action},
                           {"apt_leaf", a.target.apt_leaf},
                           {"h", a.target.h},
                           {"status", a.status},
                           {"children", a.children}});
    }
    return {{"phase", r.phase},
            {"beta", r.beta},
            {"similarity_beta", r.similarity_beta},
            {"abstract_samples", r.abstract_samples},
            {"concrete_samples", r.concrete_samples},
            {"state_targets", std::move(states)},
            {"action_targets", std::move(actions)},
            {"leaves_before", r.leaves_before},
            {"leaves_after", r.leaves_after},
            {"apt_leaves_before", r.apt_leaves_before},
            {"apt_leaves_after", r.apt_leaves_after}};
}

}  // namespace pearl
