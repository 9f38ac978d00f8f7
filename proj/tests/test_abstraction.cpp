#include <gtest/gtest.h>

#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "pearl/abstraction/serialize.hpp"
#include "pearl/abstraction/spacat.hpp"
#include "pearl/envs/registry.hpp"
#include "pearl/statlearn/svm.hpp"

using namespace pearl;

namespace {

std::vector<VariableSpec> square(double hi = 5.0) { return {continuous_var("x", 0, hi), continuous_var("y", 0, hi)}; }

std::vector<ActionSchema> one_move() { return {{"move", {continuous_var("d", 0.0, 0.5)}}}; }

std::vector<VariableSpec> mixed4() {
    return {continuous_var("x", 0, 5), continuous_var("y", -1, 1), discrete_var("c", 0, 3), discrete_var("m", 0, 2)};
}

std::vector<ActionSchema> mixed_actions() {
    return {{"go", {continuous_var("d", 0, 0.5)}},
            {"jump", {continuous_var("a", 0, 1), discrete_var("k", 0, 3)}}};
}

std::shared_ptr<statlearn::ClassifierModel> x_threshold_model(const std::vector<std::vector<double>>& pts,
                                                              double cut) {
    std::vector<int> labels;
    for (const auto& p : pts) labels.push_back(p[0] < cut ? 0 : 1);
    return std::make_shared<statlearn::ClassifierModel>(statlearn::svm_train(pts, labels));
}

}  // namespace

TEST(SpaCat, OfficeStartsUniversal) {
    auto env = make_env("office");
    SpaCat t(env->state_space(), env->actions());
    EXPECT_EQ(t.num_leaves(), 1u);
    ASSERT_EQ(t.node(0).apts.size(), 4u);
    for (const auto& apt : t.node(0).apts) EXPECT_EQ(apt.leaves().size(), 1u);
    EXPECT_EQ(t.total_apt_leaves(), 4u);
}

TEST(SpaCat, CorridorHasOneStateAndOneParamLeaf) {
    auto env = make_env("corridor");
    SpaCat t(env->state_space(), env->actions());
    EXPECT_EQ(t.num_leaves() + t.total_apt_leaves(), 2u);
}

TEST(SpaCat, EmptyActionListRejected) { EXPECT_THROW(SpaCat(square(), {}), InvalidArgument); }

TEST(SpaCat, UniversalLeafOf) {
    SpaCat t(square(), one_move());
    for (double x : {0.0, 1.3, 4.99}) EXPECT_EQ(t.leaf_of(std::vector<double>{x, 2.0}), 0);
}

TEST(SpaCat, MidpointBelongsToUpperChild) {
    SpaCat t({continuous_var("x", 0, 5)}, one_move());
    auto kids = t.refine_uniform(0, 1);
    ASSERT_EQ(kids.size(), 2u);
    EXPECT_EQ(t.leaf_of(std::vector<double>{2.5}), kids[1]);
    EXPECT_EQ(t.leaf_of(std::vector<double>{std::nextafter(2.5, 0.0)}), kids[0]);
    EXPECT_EQ(t.node(kids[1]).bounds[0].lo, 2.5);
}

TEST(SpaCat, OfficeRootSplitsPositionIntoQuadrants) {
    auto env = make_env("office");
    SpaCat t(env->state_space(), env->actions());
    EXPECT_EQ(t.split_variables(0, 2), (std::vector<int>{0, 1}));
    auto kids = t.refine_uniform(0, 2);
    EXPECT_EQ(kids.size(), 4u);
    EXPECT_EQ(t.num_leaves(), 4u);
    for (int k : kids) EXPECT_EQ(t.node(k).apts.size(), 4u);
}

TEST(SpaCat, SplitCountClampsToSplittableVariables) {
    SpaCat t({continuous_var("x", 0, 1)}, one_move());
    EXPECT_EQ(t.refine_uniform(0, 4).size(), 2u);
}

TEST(SpaCat, UniformLeafArithmetic) {
    SpaCat t(mixed4(), mixed_actions());
    Rng rng(4);
    for (int i = 0; i < 20; ++i) {
        const int leaf = t.leaves()[rng.below(t.num_leaves())];
        const int k = 1 + static_cast<int>(rng.below(4));
        const std::size_t before = t.num_leaves();
        const std::size_t effective = t.split_variables(leaf, k).size();
        if (effective == 0) {
            EXPECT_THROW(t.refine_uniform(leaf, k), UnsplittableLeaf);
            continue;
        }
        t.refine_uniform(leaf, k);
        EXPECT_EQ(t.num_leaves(), before + (std::size_t{1} << effective) - 1);
    }
}

TEST(SpaCat, ChildrenInheritApts) {
    SpaCat t(square(), one_move());
    t.apt(0, 0).refine_uniform(0);
    auto kids = t.refine_uniform(0, 2);
    for (int k : kids) EXPECT_EQ(t.apt(k, 0), t.node(kids[0]).apts[0]);
    EXPECT_EQ(t.apt(kids[0], 0).leaves().size(), 2u);
}

TEST(SpaCat, FlexibleSplitMatchesPredicate) {
    SpaCat t(square(), one_move());
    Rng rng(1);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 200; ++i) pts.push_back({rng.uniform(0, 5), rng.uniform(0, 5)});
    auto model = x_threshold_model(pts, 1.0);
    auto kids = t.refine_flexible(0, model, 2, pts);
    ASSERT_EQ(kids.size(), 2u);
    int agree_model = 0, agree_threshold = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> s{rng.uniform(0, 5), rng.uniform(0, 5)};
        const int leaf = t.leaf_of(s);
        const int cls = model->predict(s);
        agree_model += leaf == kids[static_cast<std::size_t>(cls)] ? 1 : 0;
        agree_threshold += leaf == kids[s[0] < 1.0 ? 0 : 1] ? 1 : 0;
    }
    EXPECT_EQ(agree_model, 1000);
    EXPECT_GE(agree_threshold, 980);
}

TEST(SpaCat, FlexibleNeedsTwoClasses) {
    SpaCat t(square(), one_move());
    Rng rng(2);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({rng.uniform(0, 5), rng.uniform(0, 5)});
    auto model = x_threshold_model(pts, 2.5);
    EXPECT_THROW(t.refine_flexible(0, model, 1, pts), InvalidArgument);
    EXPECT_EQ(t.num_leaves(), 1u);
}

TEST(SpaCat, FlexibleDegenerateModelRejected) {
    SpaCat t(square(), one_move());
    Rng rng(3);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({rng.uniform(0, 5), rng.uniform(0, 5)});
    auto model = x_threshold_model(pts, 2.5);
    std::vector<std::vector<double>> left_only;
    for (const auto& p : pts) {
        if (p[0] < 1.0) left_only.push_back(p);
    }
    ASSERT_FALSE(left_only.empty());
    EXPECT_THROW(t.refine_flexible(0, model, 2, left_only), DegenerateModel);
}

TEST(SpaCat, FlexibleChildrenPartitionLeaf) {
    SpaCat t(square(), one_move());
    Rng rng(5);
    t.refine_uniform(0, 1);
    const int leaf = t.leaves()[0];
    auto pts = oracle::points_in_leaf(t, leaf, 120, rng);
    std::vector<int> labels;
    for (const auto& p : pts) labels.push_back(p[1] < 1.5 ? 0 : (p[1] < 3.5 ? 1 : 2));
    auto model = std::make_shared<statlearn::ClassifierModel>(statlearn::svm_train(pts, labels));
    auto kids = t.refine_flexible(leaf, model, 3, pts);
    ASSERT_EQ(kids.size(), 3u);
    std::map<int, int> hits;
    for (int i = 0; i < 10000; ++i) {
        auto s = oracle::random_point(t.state_space(), rng);
        ASSERT_EQ(oracle::containing_leaves(t, s), 1);
        hits[t.leaf_of(s)]++;
    }
    for (int k : kids) EXPECT_GT(hits[k], 0);
}

TEST(SpaCat, RandomRefinementsKeepPartition) {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        SpaCat t(mixed4(), mixed_actions());
        oracle::random_refinements(t, 10, 5, rng);
        for (int i = 0; i < 2000; ++i) {
            auto s = oracle::random_point(t.state_space(), rng);
            const int leaf = t.leaf_of(s);
            ASSERT_EQ(oracle::containing_leaves(t, s), 1);
            ASSERT_TRUE(oracle::region_contains(t, leaf, s));
        }
    }
}

TEST(Apt, SingleLeafMapsToRoot) {
    Apt a(std::vector<VariableSpec>{continuous_var("d", 0, 0.5)});
    EXPECT_EQ(a.leaf_of(std::vector<double>{0.3}), 0);
}

TEST(Apt, HalfOpenBisection) {
    Apt a(std::vector<VariableSpec>{continuous_var("d", 0, 0.5)});
    auto kids = a.refine_uniform(0);
    ASSERT_EQ(kids.size(), 2u);
    EXPECT_EQ(a.node(kids[0]).box[0], (Interval{0.0, 0.25, VarKind::continuous}));
    EXPECT_EQ(a.node(kids[1]).box[0], (Interval{0.25, 0.5, VarKind::continuous}));
    EXPECT_EQ(a.leaf_of(std::vector<double>{0.25}), kids[1]);
}

TEST(Apt, TwoParamsGiveQuadrants) {
    Apt a(std::vector<VariableSpec>{continuous_var("x", 0, 1), continuous_var("y", 0, 1)});
    auto kids = a.refine_uniform(0);
    ASSERT_EQ(kids.size(), 4u);
    std::set<std::pair<double, double>> corners;
    for (int k : kids) corners.insert({a.node(k).box[0].lo, a.node(k).box[1].lo});
    EXPECT_EQ(corners, (std::set<std::pair<double, double>>{{0, 0}, {0.5, 0}, {0, 0.5}, {0.5, 0.5}}));
}

TEST(Apt, DiscreteHalvesLowerCodesFirst) {
    Apt a(std::vector<VariableSpec>{discrete_var("c", 0, 3)});
    auto kids = a.refine_uniform(0);
    ASSERT_EQ(kids.size(), 2u);
    EXPECT_EQ(a.node(kids[0]).box[0].lo, 0.0);
    EXPECT_EQ(a.node(kids[0]).box[0].hi, 2.0);
    EXPECT_EQ(a.node(kids[1]).box[0].lo, 2.0);
    EXPECT_EQ(a.node(kids[1]).box[0].hi, 3.0);
    EXPECT_THROW(a.refine_uniform(kids[1]), UnsplittableLeaf);
}

TEST(Apt, GridContainmentThreeLevels) {
    Apt a(std::vector<VariableSpec>{continuous_var("x", 0, 1), continuous_var("y", 0, 2)});
    Rng rng(1);
    for (int level = 0; level < 3; ++level) {
        auto leaves = a.leaves();
        for (int l : leaves) {
            if (rng.uniform() < 0.7) a.refine_uniform(l);
        }
    }
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 64; ++j) {
            std::vector<double> q{i / 64.0, j / 32.0};
            ASSERT_EQ(oracle::containing_apt_leaves(a, q), 1);
            ASSERT_TRUE(box_contains(a.node(a.leaf_of(q)).box, q));
        }
    }
}

TEST(Apt, SamplesStayInLeaf) {
    Apt a(std::vector<VariableSpec>{continuous_var("d", 0, 0.8)});
    auto kids = a.refine_uniform(0);
    auto grand = a.refine_uniform(kids[0]);
    auto grand2 = a.refine_uniform(grand[0]);
    Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        auto q = a.sample(grand2[0], rng);
        EXPECT_GE(q[0], 0.0);
        EXPECT_LT(q[0], 0.1);
    }
}

TEST(Apt, SampleMean) {
    Apt a(std::vector<VariableSpec>{continuous_var("d", 0, 0.5)});
    Rng rng(3);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += a.sample(0, rng)[0];
    EXPECT_NEAR(sum / n, 0.25, 0.005);
}

TEST(Apt, DiscreteSampleFrequencies) {
    Apt a(std::vector<VariableSpec>{discrete_var("c", 0, 3)});
    Rng rng(4);
    std::map<double, int> counts;
    const int n = 100000;
    for (int i = 0; i < n; ++i) counts[a.sample(0, rng)[0]]++;
    ASSERT_EQ(counts.size(), 3u);
    for (const auto& [code, c] : counts) EXPECT_NEAR(static_cast<double>(c) / n, 1.0 / 3.0, 0.02) << code;
}

TEST(Apt, MinWidthStopsRefinement) {
    Apt a(std::vector<VariableSpec>{continuous_var("d", 0, 1)});
    int leaf = 0;
    int splits = 0;
    while (a.can_split(leaf)) {
        leaf = a.refine_uniform(leaf)[0];
        ++splits;
    }
    EXPECT_GE(a.node(leaf).box[0].width(), 0.5e-3);
    EXPECT_LE(splits, 10);
    EXPECT_THROW(a.refine_uniform(leaf), UnsplittableLeaf);
}

TEST(Serialize, UniversalRoundTripIsExact) {
    SpaCat t(mixed4(), mixed_actions());
    const std::string text = tree_serialize(t);
    EXPECT_EQ(tree_serialize(tree_deserialize(text)), text);
}

TEST(Serialize, MixedRefinementsRoundTrip) {
    SpaCat t(mixed4(), mixed_actions());
    Rng rng(6);
    t.refine_uniform(0, 2);
    t.apt(t.leaves()[1], 1).refine_uniform(0);
    ASSERT_TRUE(oracle::random_flexible_split(t, t.leaves()[2], rng));
    t.refine_uniform(t.leaves()[0], 4);
    ASSERT_TRUE(oracle::random_flexible_split(t, t.leaves().back(), rng));

    const std::string text = tree_serialize(t);
    SpaCat back = tree_deserialize(text);
    EXPECT_EQ(tree_serialize(back), text);
    EXPECT_EQ(back.num_leaves(), t.num_leaves());
    for (int i = 0; i < 10000; ++i) {
        auto s = oracle::random_point(t.state_space(), rng);
        ASSERT_EQ(back.leaf_of(s), t.leaf_of(s));
    }
    for (int l : t.leaves()) {
        for (std::size_t a = 0; a < t.actions().size(); ++a) EXPECT_EQ(back.apt(l, a), t.apt(l, a));
    }
}

TEST(Serialize, TruncatedStreamRejected) {
    SpaCat t(square(), one_move());
    t.refine_uniform(0, 2);
    const std::string text = tree_serialize(t);
    EXPECT_THROW(tree_deserialize(text.substr(0, text.size() / 2)), MalformedTree);
    EXPECT_THROW(tree_deserialize(""), MalformedTree);
}

TEST(Serialize, BrokenInvariantRejected) {
    SpaCat t(square(), one_move());
    t.refine_uniform(0, 2);
    auto doc = tree_to_json(t);
    doc["version"] = 99;
    EXPECT_THROW(tree_from_json(doc), MalformedTree);
}
