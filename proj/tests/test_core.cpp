#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pearl/core/env.hpp"
#include "pearl/core/error.hpp"
#include "pearl/core/rng.hpp"
#include "pearl/envs/corridor.hpp"
#include "pearl/envs/registry.hpp"

using namespace pearl;

TEST(VariableSpec, HalfOpenDomain) {
    auto v = continuous_var("x", 0.0, 5.0);
    EXPECT_TRUE(v.contains(0.0));
    EXPECT_TRUE(v.contains(4.999));
    EXPECT_FALSE(v.contains(5.0));
    EXPECT_FALSE(v.contains(-1e-12));
    EXPECT_FALSE(v.contains(std::numeric_limits<double>::quiet_NaN()));
}

TEST(VariableSpec, DiscreteCodes) {
    auto c = discrete_var("city", 0, 3);
    EXPECT_EQ(c.codes(), 3);
    EXPECT_TRUE(c.contains(2.0));
    EXPECT_FALSE(c.contains(1.5));
    EXPECT_FALSE(c.contains(3.0));
}

TEST(VariableSpec, RejectsIllFormed) {
    EXPECT_THROW(continuous_var("x", 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(continuous_var("x", 0.0, std::numeric_limits<double>::infinity()), InvalidArgument);
    VariableSpec bad{"d", 0.5, 3.0, VarKind::discrete};
    EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(VariableSpec, ClampStaysInside) {
    auto v = continuous_var("x", 0.0, 1.0);
    EXPECT_EQ(clamp_to(v, -3.0), 0.0);
    EXPECT_LT(clamp_to(v, 1.0), 1.0);
    EXPECT_TRUE(v.contains(clamp_to(v, 7.0)));
    EXPECT_EQ(clamp_to(v, 0.25), 0.25);
    auto d = discrete_var("k", 0, 3);
    EXPECT_EQ(clamp_to(d, 2.7), 2.0);
    EXPECT_EQ(clamp_to(d, 9.0), 2.0);
    EXPECT_EQ(clamp_to(d, -1.0), 0.0);
}

TEST(VariableSpec, InBoundsChecksArity) {
    std::vector<VariableSpec> space{continuous_var("x", 0, 1), discrete_var("c", 0, 2)};
    EXPECT_TRUE(in_bounds(space, std::vector<double>{0.5, 1.0}));
    EXPECT_FALSE(in_bounds(space, std::vector<double>{0.5}));
    EXPECT_FALSE(in_bounds(space, std::vector<double>{0.5, 2.0}));
}

TEST(Rng, SameSeedSameStream) {
    Rng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        auto x = a.next();
        EXPECT_EQ(x, b.next());
        differs |= x != c.next();
    }
    EXPECT_TRUE(differs);
}

TEST(Rng, UniformRanges) {
    Rng r(1);
    for (int i = 0; i < 10000; ++i) {
        double u = r.uniform(2.0, 3.0);
        EXPECT_GE(u, 2.0);
        EXPECT_LT(u, 3.0);
        EXPECT_LT(r.below(7), 7u);
    }
    EXPECT_EQ(r.uniform(4.0, 4.0), 4.0);
    EXPECT_EQ(r.below(1), 0u);
}

TEST(Rng, MixSeedSeparatesStreams) {
    EXPECT_NE(mix_seed(0, 1), mix_seed(1, 0));
    EXPECT_EQ(mix_seed(5, 9), mix_seed(5, 9));
}

// Shared conformance suite over every registered environment.
class EnvContract : public ::testing::TestWithParam<std::string> {};

namespace {

GroundedAction random_action(const Env& env, Rng& rng) {
    GroundedAction a;
    a.action = rng.below(env.actions().size());
    for (const auto& p : env.actions()[a.action].params) {
        double v = rng.uniform(p.lo, p.hi);
        if (p.kind == VarKind::discrete) v = std::floor(v);
        a.args.push_back(v);
    }
    return a;
}

}  // namespace

TEST_P(EnvContract, ResetIsDeterministic) {
    auto env = make_env(GetParam());
    auto s1 = env->reset(7);
    auto s2 = env->reset(7);
    EXPECT_EQ(s1, s2);
    EXPECT_TRUE(in_bounds(env->state_space(), s1));
    EXPECT_EQ(env->steps_taken(), 0);
    EXPECT_FALSE(env->done());
}

TEST_P(EnvContract, EqualSeedsEqualTrajectories) {
    auto a = make_env(GetParam());
    auto b = make_env(GetParam());
    Rng pick(3);
    std::vector<GroundedAction> script;
    for (int i = 0; i < 200; ++i) script.push_back(random_action(*a, pick));
    a->reset(11);
    b->reset(11);
    for (const auto& act : script) {
        if (a->done()) break;
        auto ra = a->step(act);
        auto rb = b->step(act);
        ASSERT_EQ(ra.next_state, rb.next_state);
        ASSERT_EQ(ra.reward, rb.reward);
        ASSERT_EQ(ra.done, rb.done);
    }
}

TEST_P(EnvContract, BoundsRewardsAndHorizon) {
    auto env = make_env(GetParam());
    Rng pick(5);
    for (std::uint64_t ep = 0; ep < 20; ++ep) {
        env->reset(ep);
        int steps = 0;
        while (!env->done()) {
            auto r = env->step(random_action(*env, pick));
            ++steps;
            ASSERT_TRUE(in_bounds(env->state_space(), r.next_state));
            if (r.goal_reached) {
                ASSERT_EQ(r.reward, 1.0);
                ASSERT_TRUE(r.done);
            } else {
                ASSERT_EQ(r.reward, 0.0);
            }
            ASSERT_EQ(r.truncated, r.done && !r.goal_reached && steps >= env->horizon());
        }
        EXPECT_LE(steps, env->horizon());
        EXPECT_THROW(env->step(random_action(*env, pick)), EpisodeFinished);
    }
}

TEST_P(EnvContract, RejectsOutOfDomainActions) {
    auto env = make_env(GetParam());
    env->reset(0);
    GroundedAction bad{env->actions().size(), {}};
    EXPECT_THROW(env->step(bad), OutOfDomainAction);
    GroundedAction a{0, {}};
    for (const auto& p : env->actions()[0].params) a.args.push_back(p.hi);
    EXPECT_THROW(env->step(a), OutOfDomainAction);
    a.args.push_back(0.0);
    EXPECT_THROW(env->step(a), OutOfDomainAction);
    EXPECT_EQ(env->steps_taken(), 0);
}

TEST_P(EnvContract, CloneIsIndependent) {
    auto env = make_env(GetParam());
    env->reset(2);
    auto copy = env->clone();
    Rng pick(9);
    auto act = random_action(*env, pick);
    auto r1 = env->step(act);
    auto r2 = copy->step(act);
    EXPECT_EQ(r1.next_state, r2.next_state);
    EXPECT_EQ(copy->name(), env->name());
}

INSTANTIATE_TEST_SUITE_P(AllEnvs, EnvContract, ::testing::ValuesIn(env_names()));

TEST(Env, OfficeStartsAtFixedCell) {
    auto env = make_env("office");
    auto s = env->reset(7);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_DOUBLE_EQ(s[0], 0.5);
    EXPECT_DOUBLE_EQ(s[1], 4.5);
    EXPECT_EQ(s[2], 0.0);
    EXPECT_EQ(s[3], 0.0);
}

TEST(Env, CorridorStartsAtZero) {
    CorridorEnv env;
    for (std::uint64_t seed : {0u, 1u, 99u}) EXPECT_EQ(env.reset(seed), FactoredState{0.0});
}

TEST(Env, HorizonTruncates) {
    CorridorEnv env(3);
    env.reset(0);
    GroundedAction stay{0, {0.0}};
    EXPECT_FALSE(env.step(stay).done);
    EXPECT_FALSE(env.step(stay).done);
    auto r = env.step(stay);
    EXPECT_TRUE(r.done);
    EXPECT_TRUE(r.truncated);
    EXPECT_FALSE(r.goal_reached);
    EXPECT_THROW(env.set_horizon(0), InvalidArgument);
}

TEST(Env, UnknownNameRejected) { EXPECT_THROW(make_env("chess"), Error); }
