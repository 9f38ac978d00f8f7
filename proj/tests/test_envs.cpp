#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pearl/abstraction/apt.hpp"
#include "pearl/core/error.hpp"
#include "pearl/envs/corridor.hpp"
#include "pearl/envs/geometry.hpp"
#include "pearl/envs/layout.hpp"
#include "pearl/envs/multicity.hpp"
#include "pearl/envs/office.hpp"
#include "pearl/envs/pinball.hpp"
#include "pearl/envs/registry.hpp"
#include "pearl/envs/soccer.hpp"

using namespace pearl;

namespace {

enum Move : std::size_t { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

Layout shipped(const std::string& env) { return load_layout(default_layout_path(env)); }

Layout quiet(const std::string& env, geom::Vec2 start) {
    Layout l = shipped(env);
    l.noise_sigma = 0.0;
    l.start = start;
    return l;
}

// Walks along one axis toward `target` in steps below the 0.5 cap.
StepResult walk(Env& env, std::size_t move, double target, std::size_t coord) {
    StepResult r;
    for (int guard = 0; guard < 100 && !env.done(); ++guard) {
        const double gap = std::abs(target - env.state()[coord]);
        if (gap < 1e-9) break;
        r = env.step({move, {std::min(gap, 0.49)}});
    }
    return r;
}

}  // namespace

TEST(Geometry, SegmentIntersection) {
    geom::Segment wall{{1, -1}, {1, 1}};
    auto hit = geom::intersect({0, 0}, {2, 0}, wall);
    ASSERT_TRUE(hit.has_value());
    EXPECT_NEAR(hit->t, 0.5, 1e-12);
    EXPECT_NEAR(hit->normal.x, -1.0, 1e-12);
    EXPECT_FALSE(geom::intersect({0, 0}, {0.5, 0}, wall).has_value());
    EXPECT_FALSE(geom::intersect({0, 2}, {2, 0}, wall).has_value());
    EXPECT_NEAR(geom::segment_point_distance({0, 0}, {2, 0}, {1, 1}), 1.0, 1e-12);
    EXPECT_TRUE(geom::point_in_polygon({0.5, 0.5}, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    EXPECT_FALSE(geom::point_in_polygon({1.5, 0.5}, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
}

TEST(Office, OpenSpaceMove) {
    OfficeEnv env(quiet("office", {1.0, 1.0}));
    env.reset(0);
    auto r = env.step({kRight, {0.3}});
    EXPECT_NEAR(r.next_state[0], 1.3, 1e-12);
    EXPECT_EQ(r.next_state[1], 1.0);
    EXPECT_EQ(r.reward, 0.0);
    EXPECT_FALSE(r.done);
}

TEST(Office, WallTruncatesMotion) {
    // The wall x = 2.5 is solid between y = 1.6 and y = 2.5.
    OfficeEnv env(quiet("office", {2.3, 2.0}));
    env.reset(0);
    auto r = env.step({kRight, {0.4}});
    EXPECT_LT(r.next_state[0], 2.5);
    EXPECT_GT(r.next_state[0], 2.5 - 1e-5);
    EXPECT_EQ(r.next_state[1], 2.0);
    EXPECT_EQ(r.reward, 0.0);
}

TEST(Office, DoorLetsMotionThrough) {
    OfficeEnv env(quiet("office", {2.3, 4.0}));
    env.reset(0);
    auto r = env.step({kRight, {0.4}});
    EXPECT_NEAR(r.next_state[0], 2.7, 1e-12);
}

TEST(Office, CoffeePickup) {
    OfficeEnv env(quiet("office", {2.7, 4.0}));
    auto s = env.reset(0);
    EXPECT_EQ(s[2], 0.0);
    auto r = env.step({kRight, {0.3}});
    EXPECT_EQ(r.next_state[2], 1.0);
    EXPECT_EQ(r.next_state[3], 0.0);
    EXPECT_EQ(r.reward, 0.0);
}

TEST(Office, ScriptedDeliveryReachesGoal) {
    auto env = make_env("office");
    auto& office = dynamic_cast<OfficeEnv&>(*env);
    Layout l = office.layout();
    l.noise_sigma = 0.0;
    OfficeEnv e(l);
    e.reset(0);
    walk(e, kDown, 4.0, 1);
    walk(e, kRight, 3.2, 0);
    EXPECT_EQ(e.state()[2], 1.0);
    walk(e, kRight, 4.0, 0);
    walk(e, kDown, 1.9, 1);
    EXPECT_EQ(e.state()[3], 1.0);
    auto r = walk(e, kDown, 0.5, 1);
    EXPECT_TRUE(r.done);
    EXPECT_TRUE(r.goal_reached);
    EXPECT_EQ(r.reward, 1.0);
    EXPECT_LE(e.steps_taken(), e.horizon());
}

TEST(Office, OfficeWithoutItemsIsNotGoal) {
    OfficeEnv env(quiet("office", {4.5, 1.2}));
    env.reset(0);
    auto r = env.step({kDown, {0.49}});
    EXPECT_FALSE(r.goal_reached);
    EXPECT_EQ(r.reward, 0.0);
}

TEST(Office, NeverCrossesWalls) {
    auto env = make_env("office");
    const auto walls = dynamic_cast<OfficeEnv&>(*env).layout().walls;
    Rng rng(1);
    for (std::uint64_t ep = 0; ep < 30; ++ep) {
        env->reset(ep);
        while (!env->done()) {
            const geom::Vec2 p{env->state()[0], env->state()[1]};
            auto r = env->step({rng.below(4), {rng.uniform(0, 0.5)}});
            const geom::Vec2 q{r.next_state[0], r.next_state[1]};
            ASSERT_FALSE(geom::first_hit(p, q - p, walls).has_value());
        }
    }
}

TEST(MultiCity, FlyBetweenAirports) {
    MultiCityEnv env(quiet("multicity", {4.5, 4.5}));
    env.reset(0);
    auto r = env.step({MultiCityEnv::kFly, {2.0}});
    EXPECT_EQ(r.next_state[0], 2.0);
    EXPECT_EQ(r.next_state[1], 2.5);
    EXPECT_EQ(r.next_state[2], 2.5);
    EXPECT_EQ(r.next_state[3], 0.0);
    EXPECT_FALSE(r.done);
}

TEST(MultiCity, FlyAwayFromAirportIsNoop) {
    MultiCityEnv env(quiet("multicity", {0.5, 0.5}));
    auto s = env.reset(0);
    auto r = env.step({MultiCityEnv::kFly, {1.0}});
    EXPECT_EQ(r.next_state, s);
    EXPECT_EQ(env.steps_taken(), 1);
    EXPECT_EQ(r.reward, 0.0);
}

TEST(MultiCity, ScriptedDelivery) {
    MultiCityEnv env(quiet("multicity", {0.5, 0.5}));
    env.reset(0);
    walk(env, kUp, 4.5, 2);
    walk(env, kRight, 4.5, 1);
    env.step({MultiCityEnv::kFly, {1.0}});
    EXPECT_EQ(env.state()[0], 1.0);
    walk(env, kRight, 4.5, 1);
    walk(env, kDown, 0.5, 2);
    EXPECT_EQ(env.state()[3], 1.0);
    walk(env, kUp, 4.5, 2);
    walk(env, kLeft, 0.5, 1);
    auto r = env.step({MultiCityEnv::kFly, {2.0}});
    EXPECT_TRUE(r.goal_reached);
    EXPECT_TRUE(r.done);
    EXPECT_EQ(r.reward, 1.0);
}

TEST(MultiCity, CityWallBlocks) {
    MultiCityEnv env(quiet("multicity", {1.8, 1.0}));
    env.reset(0);
    auto r = env.step({kRight, {0.4}});
    EXPECT_LT(r.next_state[1], 2.0);
    EXPECT_GT(r.next_state[1], 2.0 - 1e-5);
}

namespace {

Layout open_pinball(geom::Vec2 start) {
    Layout l = shipped("pinball");
    l.obstacles.clear();
    l.start = start;
    return l;
}

}  // namespace

TEST(Pinball, NoopKinematics) {
    PinballEnv env(open_pinball({5.0, 5.0}));
    env.reset(0);
    auto r1 = env.step({0, {0.1}});
    EXPECT_NEAR(r1.next_state[0], 5.1, 1e-12);
    EXPECT_NEAR(r1.next_state[2], 0.1 * 0.995, 1e-12);
    auto r2 = env.step({PinballEnv::kNoop, {}});
    EXPECT_NEAR(r2.next_state[0], 5.1 + 0.1 * 0.995, 1e-12);
    EXPECT_NEAR(r2.next_state[2], 0.1 * 0.995 * 0.995, 1e-12);
    EXPECT_EQ(r2.next_state[1], 5.0);
    EXPECT_EQ(r2.next_state[3], 0.0);
}

TEST(Pinball, HeadOnReflection) {
    Layout l = open_pinball({9.5, 5.0});
    l.physics["a_max"] = 1.0;
    l.physics["restitution"] = 0.5;
    l.physics["drag"] = 1.0;
    PinballEnv env(l);
    env.reset(0);
    auto r = env.step({0, {0.8}});
    EXPECT_NEAR(r.next_state[2], -0.5 * 0.8, 1e-12);
    EXPECT_EQ(r.next_state[3], 0.0);
    EXPECT_LT(r.next_state[0], 10.0);
    EXPECT_GT(r.next_state[0], 10.0 - 1e-5);
}

TEST(Pinball, NoopNeverGainsSpeed) {
    auto env = make_env("pinball");
    Rng rng(2);
    for (std::uint64_t ep = 0; ep < 10; ++ep) {
        env->reset(ep);
        while (!env->done()) {
            const auto& s = env->state();
            const double before = s[2] * s[2] + s[3] * s[3];
            if (rng.uniform() < 0.5) {
                auto r = env->step({PinballEnv::kNoop, {}});
                const double after = r.next_state[2] * r.next_state[2] + r.next_state[3] * r.next_state[3];
                ASSERT_LE(after, before + 1e-12);
            } else {
                env->step({rng.below(4), {rng.uniform(0, 0.2)}});
            }
        }
    }
}

TEST(Pinball, HoleEndsEpisode) {
    Layout l = open_pinball({7.0, 8.5});
    PinballEnv env(l);
    env.reset(0);
    StepResult r;
    for (int i = 0; i < 50 && !env.done(); ++i) r = env.step({0, {0.19}});
    EXPECT_TRUE(r.goal_reached);
    EXPECT_EQ(r.reward, 1.0);
}

TEST(Pinball, UnknownPhysicsKeyRejected) {
    Layout l = shipped("pinball");
    l.physics["gravity"] = 9.8;
    EXPECT_THROW(PinballEnv{l}, MalformedLayout);
}

namespace {

Layout still_keeper() {
    Layout l = shipped("soccer");
    l.physics["kick_noise"] = 0.0;
    l.physics["shot_noise"] = 0.0;
    l.physics["keeper_speed"] = 0.0;
    return l;
}

}  // namespace

TEST(Soccer, GoalBetweenPostsScores) {
    SoccerEnv env(still_keeper());
    env.reset(3);
    auto k = env.step({SoccerEnv::kKickTo, {8.0, 3.2}});
    EXPECT_FALSE(k.done);
    EXPECT_NEAR(k.next_state[2], 8.0, 1e-9);
    EXPECT_NEAR(k.next_state[3], 3.2, 1e-9);
    EXPECT_EQ(k.next_state[0], k.next_state[2]);
    auto r = env.step({SoccerEnv::kShootLeft, {3.2}});
    EXPECT_TRUE(r.done);
    EXPECT_TRUE(r.goal_reached);
    EXPECT_EQ(r.reward, 1.0);
}

TEST(Soccer, LeavingPlayEnds) {
    SoccerEnv env(still_keeper());
    env.reset(3);
    env.step({SoccerEnv::kKickTo, {9.0, 0.2}});
    auto r = env.step({SoccerEnv::kShootLeft, {3.0}});
    EXPECT_TRUE(r.done);
    EXPECT_FALSE(r.goal_reached);
    EXPECT_FALSE(r.truncated);
    EXPECT_EQ(r.reward, 0.0);
}

TEST(Soccer, CentredKeeperCapturesCentralShot) {
    // After a short kick to (2, 4) the keeper is within 0.72 of the centre
    // (at most six ticks at 0.12). The shot needs about eight ticks to reach
    // x = 9.6, so the keeper closes the remaining gap before it arrives.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SoccerEnv env(shipped("soccer"));
        env.reset(seed);
        auto k = env.step({SoccerEnv::kKickTo, {2.0, 4.0}});
        ASSERT_FALSE(k.done);
        EXPECT_NEAR(k.next_state[4], 4.0, 0.72 + 1e-9);
        auto r = env.step({SoccerEnv::kShootRight, {4.0}});
        EXPECT_TRUE(r.done) << seed;
        EXPECT_FALSE(r.goal_reached) << seed;
        EXPECT_EQ(r.reward, 0.0);
    }
}

TEST(Corridor, TenNearMaximalStepsReachGoal) {
    CorridorEnv env;
    env.reset(0);
    const double d = 0.1 - 1e-7;
    for (int i = 1; i <= 10; ++i) {
        auto r = env.step({0, {d}});
        if (i < 10) {
            EXPECT_FALSE(r.done) << i;
            EXPECT_EQ(r.reward, 0.0);
        } else {
            EXPECT_TRUE(r.goal_reached);
            EXPECT_EQ(r.reward, 1.0);
        }
    }
}

namespace {

// Expected number of Uniform[a, b) increments to cover `dist`, from the
// renewal equation m(t) = 1 + E[m(t - U)], solved on a grid.
double renewal_steps(double dist, double a, double b) {
    const int n = 9000;
    const double h = dist / n;
    std::vector<double> m(n + 1, 0.0), prefix(n + 2, 0.0);
    auto at = [&](double t) {
        if (t <= 0.0) return 0.0;
        const double pos = t / h;
        const int i = static_cast<int>(pos);
        const double f = pos - i;
        return i >= n ? m[n] : m[i] * (1 - f) + m[i + 1] * f;
    };
    for (int i = 1; i <= n; ++i) {
        const double t = i * h;
        const int k = 400;
        double acc = 0.0;
        for (int j = 0; j < k; ++j) acc += at(t - (a + (j + 0.5) * (b - a) / k));
        m[i] = 1.0 + acc / k;
    }
    return m[n];
}

}  // namespace

TEST(Corridor, ExpectedStepsFromTopParameterLeaf) {
    // The top leaf after one bisection is [0.05, 0.1); a second gives
    // [0.075, 0.1). Monte-Carlo through the environment against the renewal
    // oracle.
    Apt apt(std::vector<VariableSpec>{continuous_var("d", 0.0, CorridorEnv::kMaxStep)});
    int top = apt.refine_uniform(0)[1];
    for (int level = 1; level <= 2; ++level) {
        const auto& box = apt.node(top).box[0];
        const double oracle = renewal_steps(CorridorEnv::kGoal, box.lo, box.hi);
        CorridorEnv env(40);
        Rng rng(level);
        const int episodes = 20000;
        double total = 0.0;
        for (int ep = 0; ep < episodes; ++ep) {
            env.reset(0);
            StepResult r;
            while (!env.done()) r = env.step({0, apt.sample(top, rng)});
            ASSERT_TRUE(r.goal_reached);
            total += env.steps_taken();
        }
        EXPECT_NEAR(total / episodes, oracle, 0.03) << "leaf [" << box.lo << ", " << box.hi << ")";
        top = apt.refine_uniform(top)[1];
    }
}

TEST(Layout, RoundTripAndValidation) {
    Layout l = shipped("office");
    EXPECT_TRUE(layout_problems(l).empty());
    Layout back = layout_from_json(layout_to_json(l));
    EXPECT_EQ(back.walls.size(), l.walls.size());
    EXPECT_EQ(back.stations.size(), l.stations.size());
    EXPECT_NO_THROW(require_layout(back, "office"));
    EXPECT_THROW(require_layout(back, "pinball"), MalformedLayout);
}

TEST(Layout, RejectsBrokenDocuments) {
    auto doc = layout_to_json(shipped("office"));
    auto no_bounds = doc;
    no_bounds.erase("bounds");
    EXPECT_THROW(layout_from_json(no_bounds), MalformedLayout);
    auto bad_version = doc;
    bad_version["version"] = 7;
    EXPECT_THROW(layout_from_json(bad_version), MalformedLayout);
    EXPECT_THROW(layout_from_json(nlohmann::json::array()), MalformedLayout);
    EXPECT_THROW(load_layout("/nonexistent/office.json"), MalformedLayout);
}

TEST(Layout, GeometryProblemsReported) {
    Layout l = shipped("office");
    l.stations[0].area = {4.5, 4.5, 6.0, 6.0};
    EXPECT_FALSE(layout_problems(l).empty());
    EXPECT_THROW(OfficeEnv{l}, MalformedLayout);
    Layout missing = shipped("office");
    missing.stations.pop_back();
    EXPECT_FALSE(layout_problems(missing).empty());
}

TEST(Layout, GarbageFileRejected) {
    const std::string path = ::testing::TempDir() + "/garbage_layout.json";
    std::ofstream(path) << "{ not json";
    EXPECT_THROW(load_layout(path), MalformedLayout);
}
