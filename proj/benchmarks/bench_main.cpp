#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "pearl/abstraction/spacat.hpp"
#include "pearl/core/rng.hpp"
#include "pearl/envs/registry.hpp"
#include "pearl/learner/qtable.hpp"
#include "pearl/learner/td.hpp"
#include "pearl/statlearn/cluster.hpp"
#include "pearl/statlearn/svm.hpp"

using namespace pearl;

namespace {

std::vector<std::vector<double>> uniform_points(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> p(n, std::vector<double>(d));
    for (auto& row : p) {
        for (auto& v : row) v = rng.uniform();
    }
    return p;
}

SpaCat refined_office_tree(int rounds) {
    auto env = make_env("office");
    SpaCat tree(env->state_space(), env->actions());
    Rng rng(1);
    for (int i = 0; i < rounds; ++i) {
        const int leaf = tree.leaves()[rng.below(tree.num_leaves())];
        try {
            tree.refine_uniform(leaf, 2);
        } catch (const std::exception&) {
        }
    }
    return tree;
}

}  // namespace

static void BM_LeafOf(benchmark::State& state) {
    SpaCat tree = refined_office_tree(static_cast<int>(state.range(0)));
    Rng rng(2);
    std::vector<double> s{0, 0, 0, 0};
    for (auto _ : state) {
        s[0] = rng.uniform(0, 5);
        s[1] = rng.uniform(0, 5);
        benchmark::DoNotOptimize(tree.leaf_of(s));
    }
    state.counters["leaves"] = static_cast<double>(tree.num_leaves());
}
BENCHMARK(BM_LeafOf)->Arg(10)->Arg(100)->Arg(1000);

static void BM_Dendrogram(benchmark::State& state) {
    auto pts = uniform_points(static_cast<std::size_t>(state.range(0)), 1, 3);
    for (auto _ : state) {
        statlearn::Dendrogram d(pts, statlearn::Linkage::ward);
        benchmark::DoNotOptimize(d.clusters_at(0.1));
    }
}
BENCHMARK(BM_Dendrogram)->Arg(100)->Arg(400)->Arg(1200)->Unit(benchmark::kMillisecond);

static void BM_AdaptiveCluster(benchmark::State& state) {
    auto pts = uniform_points(static_cast<std::size_t>(state.range(0)), 1, 4);
    for (auto _ : state) benchmark::DoNotOptimize(statlearn::adaptive_cluster(pts, 3));
}
BENCHMARK(BM_AdaptiveCluster)->Arg(400)->Arg(1200)->Unit(benchmark::kMillisecond);

static void BM_SvmTrain(benchmark::State& state) {
    auto pts = uniform_points(static_cast<std::size_t>(state.range(0)), 4, 5);
    std::vector<int> labels;
    for (const auto& p : pts) labels.push_back(p[0] + 0.5 * p[1] > 0.75 ? 1 : 0);
    statlearn::SvmOptions opt;
    opt.kernel = state.range(1) ? statlearn::KernelChoice::rbf : statlearn::KernelChoice::linear;
    for (auto _ : state) benchmark::DoNotOptimize(statlearn::svm_train(pts, labels, opt));
}
BENCHMARK(BM_SvmTrain)->Args({200, 0})->Args({200, 1})->Args({1200, 0})->Unit(benchmark::kMillisecond);

static void BM_EnvStep(benchmark::State& state) {
    auto env = make_env(env_names()[static_cast<std::size_t>(state.range(0))]);
    Rng rng(6);
    env->reset(0);
    std::uint64_t episode = 0;
    for (auto _ : state) {
        if (env->done()) env->reset(++episode);
        GroundedAction a;
        a.action = rng.below(env->actions().size());
        for (const auto& p : env->actions()[a.action].params) {
            double v = rng.uniform(p.lo, p.hi);
            a.args.push_back(p.kind == VarKind::discrete ? std::floor(v) : v);
        }
        benchmark::DoNotOptimize(env->step(a));
    }
    state.SetLabel(env->name());
}
BENCHMARK(BM_EnvStep)->DenseRange(0, 4);

static void BM_TdUpdate(benchmark::State& state) {
    SpaCat tree = refined_office_tree(50);
    QTable q;
    EligibilityTraces traces;
    Rng rng(7);
    const auto& leaves = tree.leaves();
    for (auto _ : state) {
        AbstractTransition t;
        t.leaf = leaves[rng.below(leaves.size())];
        t.next_leaf = leaves[rng.below(leaves.size())];
        t.action = {static_cast<int>(rng.below(4)), 0};
        t.reward = rng.uniform() < 0.01 ? 1.0 : 0.0;
        t.step_count = 1;
        benchmark::DoNotOptimize(td_lambda_update(q, traces, tree, t, 0.05, 0.99, 0.9));
    }
}
BENCHMARK(BM_TdUpdate);

BENCHMARK_MAIN();
