#include <gtest/gtest.h>

#include <algorithm>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "pearl/abstraction/serialize.hpp"
#include "pearl/learner/policy.hpp"
#include "pearl/refinement/beta.hpp"
#include "pearl/refinement/heterogeneity.hpp"
#include "pearl/refinement/refine.hpp"

using namespace pearl;

namespace {

constexpr double kExact = 1e-12;

std::vector<ActionSchema> two_actions() {
    return {{"a", {continuous_var("d", 0, 1)}}, {"b", {continuous_var("d", 0, 1)}}};
}

// Leaves 1 (x < 1) and 2 over [0,2) x [0,2).
SpaCat split_tree() {
    SpaCat t({continuous_var("x", 0, 2), continuous_var("y", 0, 2)}, two_actions());
    t.refine_uniform(0, 1);
    return t;
}

AbstractTransition abs_t(int leaf, int action, double r, int next) { return {leaf, {action, 0}, r, next, false, 1}; }

ConcreteTransition con_t(double x, int action, double r) { return {{x, 0.5}, {action, 0}, r, {1.5, 0.5}, true}; }

}  // namespace

TEST(Beta, Schedule) {
    auto s = BetaSchedule::make(1.0, 0.02);
    EXPECT_EQ(s.beta, 1.0);
    for (int i = 0; i < 10; ++i) s = beta_step(s);
    EXPECT_NEAR(s.beta, 0.8, kExact);
    for (int i = 0; i < 50; ++i) s = beta_step(s);
    EXPECT_EQ(s.beta, 0.0);
    EXPECT_EQ(s.refinements_done, 60);
    EXPECT_EQ(BetaSchedule::make(0.0, 0.02).beta, 0.0);
}

TEST(Heterogeneity, EmptyBuffers) {
    SpaCat t = split_tree();
    auto h = compute_heterogeneity(QTable{}, TraceBuffers{}, t, 1.0, 0.99);
    EXPECT_TRUE(h.per_pair.empty());
    EXPECT_TRUE(h.per_state.empty());
    EXPECT_TRUE(select_targets(h, 2, 3).empty());
}

TEST(Heterogeneity, IdenticalErrorsGiveZero) {
    SpaCat t = split_tree();
    TraceBuffers b;
    b.abstract_buf = {abs_t(1, 0, 0.5, 2), abs_t(1, 0, 0.5, 2), abs_t(1, 0, 0.5, 2)};
    auto h = compute_heterogeneity(QTable{}, b, t, 1.0, 0.99);
    EXPECT_EQ(h.per_pair.at(QKey{1, 0, 0}), 0.0);
}

TEST(Heterogeneity, PopulationSdOfTwo) {
    SpaCat t = split_tree();
    TraceBuffers b;
    b.abstract_buf = {abs_t(1, 0, 0.0, 2), abs_t(1, 0, 2.0, 2)};
    // A large value spread that beta = 1 must ignore.
    b.concrete_buf = {con_t(0.2, 0, 0.0), con_t(0.4, 0, 100.0)};
    auto h = compute_heterogeneity(QTable{}, b, t, 1.0, 0.99);
    EXPECT_NEAR(h.per_pair.at(QKey{1, 0, 0}), 1.0, kExact);
    EXPECT_NEAR(h.per_state.at(1), 1.0, kExact);
}

TEST(Heterogeneity, Blend) {
    EXPECT_NEAR(blend_heterogeneity(0.25, 1.0, 3.0), 2.5, kExact);
    SpaCat t = split_tree();
    TraceBuffers b;
    b.abstract_buf = {abs_t(1, 0, 0.0, 2), abs_t(1, 0, 2.0, 2)};
    b.concrete_buf = {con_t(0.2, 0, 0.0), con_t(0.4, 0, 6.0)};
    auto h = compute_heterogeneity(QTable{}, b, t, 0.25, 0.99);
    EXPECT_NEAR(h.td_sd.at(QKey{1, 0, 0}), 1.0, kExact);
    EXPECT_NEAR(h.value_sd.at(1), 3.0, kExact);
    EXPECT_NEAR(h.per_pair.at(QKey{1, 0, 0}), 2.5, kExact);
}

TEST(Heterogeneity, BetaZeroUsesOnlyValues) {
    SpaCat t = split_tree();
    TraceBuffers b;
    b.abstract_buf = {abs_t(1, 0, 0.0, 2), abs_t(1, 0, 50.0, 2)};
    b.concrete_buf = {con_t(0.2, 0, 1.0), con_t(0.4, 0, 1.0)};
    auto h = compute_heterogeneity(QTable{}, b, t, 0.0, 0.99);
    EXPECT_EQ(h.per_pair.at(QKey{1, 0, 0}), 0.0);
}

TEST(Heterogeneity, PermutationInvariant) {
    SpaCat t = split_tree();
    QTable q;
    q.set({1, 0, 0}, 0.3);
    q.set({2, 1, 0}, 0.7);
    TraceBuffers b;
    Rng rng(1);
    for (int i = 0; i < 40; ++i) {
        const int leaf = 1 + static_cast<int>(rng.below(2));
        b.abstract_buf.push_back(abs_t(leaf, static_cast<int>(rng.below(2)), rng.uniform(), 3 - leaf));
        b.concrete_buf.push_back(con_t(rng.uniform(0, 2), static_cast<int>(rng.below(2)), rng.uniform()));
    }
    auto h1 = compute_heterogeneity(q, b, t, 0.6, 0.9);
    std::reverse(b.abstract_buf.begin(), b.abstract_buf.end());
    std::rotate(b.concrete_buf.begin(), b.concrete_buf.begin() + 7, b.concrete_buf.end());
    auto h2 = compute_heterogeneity(q, b, t, 0.6, 0.9);
    ASSERT_EQ(h1.per_pair.size(), h2.per_pair.size());
    for (const auto& [k, v] : h1.per_pair) EXPECT_NEAR(h2.per_pair.at(k), v, 1e-12);
}

TEST(SelectTargets, TopKByH) {
    HeterogeneityTable h;
    h.per_state = {{3, 5.0}, {4, 3.0}, {5, 1.0}, {6, 0.0}};
    auto plan = select_targets(h, 2, 0);
    ASSERT_EQ(plan.state_targets.size(), 2u);
    EXPECT_EQ(plan.state_targets[0].leaf, 3);
    EXPECT_EQ(plan.state_targets[1].leaf, 4);
    EXPECT_TRUE(plan.action_targets.empty());
    auto with_backups = select_targets(h, 1, 0, 5);
    ASSERT_EQ(with_backups.state_backups.size(), 2u);
    EXPECT_EQ(with_backups.state_backups[0].leaf, 4);
    EXPECT_EQ(with_backups.state_backups[1].leaf, 5);
}

TEST(SelectTargets, TiesPreferLowerIds) {
    HeterogeneityTable h;
    h.per_state = {{9, 2.0}, {4, 2.0}, {7, 1.0}};
    h.per_pair = {{QKey{4, 1, 0}, 1.0}, {QKey{4, 0, 2}, 1.0}, {QKey{2, 1, 0}, 1.0}, {QKey{9, 0, 0}, 3.0}};
    auto plan = select_targets(h, 1, 3);
    ASSERT_EQ(plan.state_targets.size(), 1u);
    EXPECT_EQ(plan.state_targets[0].leaf, 4);
    ASSERT_EQ(plan.action_targets.size(), 3u);
    EXPECT_EQ(plan.action_targets[0].leaf, 9);
    EXPECT_EQ(plan.action_targets[1].leaf, 2);
    EXPECT_EQ(plan.action_targets[2].leaf, 4);
    EXPECT_EQ(plan.action_targets[2].action, 0);
}

TEST(Similarity, ZeroEverything) {
    SpaCat t = split_tree();
    HeterogeneityTable h;
    std::vector<ConcreteTransition> c{con_t(0.1, 0, 0.0), con_t(0.3, 1, 0.0), con_t(0.7, 0, 0.0)};
    auto s = similarity_scores(QTable{}, c, t, 1, h, 0.5, 0.99);
    ASSERT_EQ(s.score.size(), 3u);
    for (double j : s.score) EXPECT_EQ(j, 0.0);
}

TEST(Similarity, Endpoints) {
    SpaCat t = split_tree();
    QTable q;
    q.set({1, 0, 0}, 0.2);
    q.set({1, 1, 0}, 0.9);
    HeterogeneityTable h;
    h.per_pair = {{QKey{1, 0, 0}, 0.1}, {QKey{1, 1, 0}, 0.4}};
    std::vector<ConcreteTransition> c{con_t(0.1, 0, 1.0), con_t(0.3, 1, 0.0), con_t(1.5, 0, 1.0)};
    auto s1 = similarity_scores(q, c, t, 1, h, 1.0, 0.99);
    auto s0 = similarity_scores(q, c, t, 1, h, 0.0, 0.99);
    EXPECT_EQ(s1.focus, (AbstractAction{1, 0}));
    ASSERT_EQ(s1.index, (std::vector<std::size_t>{0, 1}));
    EXPECT_NEAR(s1.td_estimate[0], 1.0 - 0.2, kExact);
    EXPECT_NEAR(s1.value[0], 1.0 - 0.9, kExact);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(s1.score[i], s1.td_estimate[i]);
        EXPECT_EQ(s0.score[i], s0.value[i]);
    }
}

TEST(Similarity, NeedsTwoTransitions) {
    SpaCat t = split_tree();
    std::vector<ConcreteTransition> c{con_t(0.1, 0, 1.0), con_t(1.5, 0, 1.0)};
    EXPECT_THROW(similarity_scores(QTable{}, c, t, 1, HeterogeneityTable{}, 1.0, 0.99), InsufficientData);
}

TEST(Migrate, StateSplitCopiesRows) {
    QTable q;
    q.set({5, 0, 0}, 0.7);
    q.set({5, 1, 2}, 0.1);
    q.set({6, 0, 0}, 9.0);
    const std::size_t before = q.size();
    migrate_q_state(q, 5, {10, 11, 12});
    EXPECT_EQ(q.size(), before + (3 - 1) * 2);
    for (int c : {10, 11, 12}) {
        EXPECT_EQ(q.get({c, 0, 0}), 0.7);
        EXPECT_EQ(q.get({c, 1, 2}), 0.1);
    }
    EXPECT_FALSE(q.contains({5, 0, 0}));
    EXPECT_EQ(q.get({6, 0, 0}), 9.0);
}

TEST(Migrate, AptSplitCopiesRow) {
    QTable q;
    q.set({3, 1, 0}, 0.4);
    migrate_q_apt(q, 3, 1, 0, {1, 2});
    EXPECT_EQ(q.get({3, 1, 1}), 0.4);
    EXPECT_EQ(q.get({3, 1, 2}), 0.4);
    EXPECT_FALSE(q.contains({3, 1, 0}));
}

TEST(RefineStep, UniformAddsThreeLeaves) {
    SpaCat t({continuous_var("x", 0, 2), continuous_var("y", 0, 2)}, two_actions());
    QTable q;
    q.set({0, 1, 0}, 0.7);
    RefinementPlan plan;
    plan.state_targets = {{0, 1.0}};
    RefinementParams p;
    p.mode = RefinementMode::uniform;
    p.variables_to_split = 2;
    auto hb = BetaSchedule::make(1.0, 0.02), sb = BetaSchedule::make(1.0, 0.02);
    auto r = refine_step(t, q, TraceBuffers{}, plan, HeterogeneityTable{}, p, hb, sb, 0.99);
    EXPECT_EQ(t.num_leaves(), 4u);
    EXPECT_EQ(r.leaves_after, r.leaves_before + 3);
    for (int c : t.leaves()) {
        EXPECT_EQ(q.get({c, 1, 0}), 0.7);
        EXPECT_EQ(greedy_first(q, t, c), (AbstractAction{1, 0}));
    }
}

TEST(RefineStep, EmptyPlanStillStepsBeta) {
    SpaCat t = split_tree();
    QTable q;
    auto hb = BetaSchedule::make(1.0, 0.02), sb = BetaSchedule::make(1.0, 0.05);
    auto before = tree_serialize(t);
    refine_step(t, q, TraceBuffers{}, RefinementPlan{}, HeterogeneityTable{}, RefinementParams{}, hb, sb, 0.99);
    EXPECT_EQ(tree_serialize(t), before);
    EXPECT_NEAR(hb.beta, 0.98, kExact);
    EXPECT_NEAR(sb.beta, 0.95, kExact);
}

TEST(RefineStep, ActionTargetsBisectApts) {
    SpaCat t = split_tree();
    QTable q;
    q.set({2, 1, 0}, 0.6);
    RefinementPlan plan;
    plan.action_targets = {{2, 1, 0, 1.0}};
    auto hb = BetaSchedule::make(1.0, 0.02), sb = hb;
    auto r = refine_step(t, q, TraceBuffers{}, plan, HeterogeneityTable{}, RefinementParams{}, hb, sb, 0.99);
    ASSERT_EQ(r.actions.size(), 1u);
    EXPECT_EQ(r.actions[0].status, "refined");
    EXPECT_EQ(t.apt(2, 1).leaves().size(), 2u);
    EXPECT_EQ(t.apt(1, 1).leaves().size(), 1u);
    for (int c : r.actions[0].children) EXPECT_EQ(q.get({2, 1, c}), 0.6);
}

TEST(RefineStep, PlantedBoundaryRecovered) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto r = oracle::planted_recovery(400, seed);
        ASSERT_EQ(r.children, 2u) << seed;
        EXPECT_GE(r.agreement, 0.95) << seed;
        ASSERT_EQ(r.report.states.size(), 1u);
        EXPECT_LE(r.report.states[0].clusters, 3);
    }
}

TEST(RefineStep, TooFewSamplesSkipAndBackfill) {
    // Leaf 1 has high H but only 3 transitions; leaf 2 holds a planted split.
    SpaCat t = split_tree();
    QTable q;
    TraceBuffers b;
    Rng rng(2);
    b.abstract_buf = {abs_t(1, 0, 0.0, 2), abs_t(1, 0, 10.0, 2)};
    for (int i = 0; i < 3; ++i) b.concrete_buf.push_back(con_t(rng.uniform(0, 1), 0, i * 5.0));
    for (int i = 0; i < 60; ++i) {
        const double x = rng.uniform(1, 2);
        b.abstract_buf.push_back(abs_t(2, 0, x < 1.5 ? 1.0 : 0.0, 1));
        b.concrete_buf.push_back({{x, rng.uniform(0, 2)}, {0, 0}, x < 1.5 ? 1.0 : 0.0, {0.5, 0.5}, true});
    }
    RefinementParams p;
    p.mode = RefinementMode::flexible;
    p.k_cap = 1;
    p.k_cap_actions = 0;
    p.min_samples = 10;

    SpaCat t0 = t;
    QTable q0 = q;
    auto hb = BetaSchedule::make(1.0, 0.02), sb = hb;
    auto r0 = refine_phase(t0, q0, b, p, hb, sb, 0.99, 1);
    ASSERT_EQ(r0.states.size(), 1u);
    EXPECT_EQ(r0.states[0].leaf, 1);
    EXPECT_EQ(r0.states[0].status, "skipped: insufficient data");
    EXPECT_EQ(t0.num_leaves(), 2u);

    p.backfill = 1;
    hb = BetaSchedule::make(1.0, 0.02);
    sb = hb;
    auto r1 = refine_phase(t, q, b, p, hb, sb, 0.99, 1);
    ASSERT_EQ(r1.states.size(), 2u);
    EXPECT_EQ(r1.states[1].leaf, 2);
    EXPECT_EQ(r1.states[1].status, "refined");
    EXPECT_EQ(t.num_leaves(), 3u);
    for (int i = 0; i < 2000; ++i) {
        std::vector<double> s{rng.uniform(0, 2), rng.uniform(0, 2)};
        ASSERT_EQ(oracle::containing_leaves(t, s), 1);
    }
}

TEST(RefineStep, GreedyPolicyUnchangedBySplit) {
    SpaCat t({continuous_var("x", 0, 2), continuous_var("y", 0, 2)}, two_actions());
    t.apt(0, 0).refine_uniform(0);
    QTable q;
    q.set({0, 0, 2}, 0.8);
    q.set({0, 1, 0}, 0.3);
    RefinementPlan plan;
    plan.state_targets = {{0, 1.0}};
    plan.action_targets = {{0, 1, 0, 0.5}};
    RefinementParams p;
    p.mode = RefinementMode::uniform;
    auto hb = BetaSchedule::make(1.0, 0.02), sb = hb;
    refine_step(t, q, TraceBuffers{}, plan, HeterogeneityTable{}, p, hb, sb, 0.99);
    for (int c : t.leaves()) EXPECT_EQ(greedy_first(q, t, c), (AbstractAction{0, 2}));
}

TEST(RefineStep, ReportSerializes) {
    auto r = oracle::planted_recovery(200, 5);
    auto j = to_json(r.report);
    EXPECT_EQ(j["phase"], 1);
    EXPECT_EQ(j["state_targets"].size(), 1u);
    EXPECT_EQ(j["state_targets"][0]["status"], "refined");
}
