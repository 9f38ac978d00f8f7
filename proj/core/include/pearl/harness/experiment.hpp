#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pearl/abstraction/spacat.hpp"
#include "pearl/core/env.hpp"
#include "pearl/harness/config.hpp"
#include "pearl/learner/qtable.hpp"
#include "pearl/refinement/refine.hpp"

namespace pearl {

struct MetricsRow {
    int episode = 0;
    double train_return = 0.0;
    double cumulative_avg_return = 0.0;
    std::optional<double> greedy_success_rate;
    std::size_t n_state_leaves = 0;
    std::size_t n_apt_leaves_total = 0;
    double beta = 0.0;
    double wall_time_s = 0.0;
};

struct RunResult {
    std::vector<MetricsRow> metrics;
    SpaCat tree;
    QTable q;
    std::vector<PhaseReport> reports;
    /// Episodes after which a refinement phase ran.
    std::vector<int> refinement_episodes;
};

/// Builds the configured environment with the config's horizon and gamma.
std::unique_ptr<Env> make_configured_env(const ExperimentConfig& cfg);

/// Called after every episode with the row just recorded.
using EpisodeObserver = std::function<void(const MetricsRow&)>;

/// Learning/refinement loop for one seed. Deterministic given (cfg, seed).
RunResult run_experiment(const ExperimentConfig& cfg, std::uint64_t seed, const EpisodeObserver& observer = {});

struct EvalOptions {
    bool redecide = true;
    bool resample_each_step = true;
};

/// Fraction of `episodes` greedy (epsilon = 0, random tie-breaking) episodes
/// that reach the goal within the horizon. `env` is cloned, not mutated.
double evaluate_greedy(const Env& env, const SpaCat& tree, const QTable& q, int episodes, std::uint64_t seed,
                       const EvalOptions& options = {});

inline constexpr const char* kMetricsHeaderComment = "# pearl-metrics v1";
inline constexpr const char* kMetricsColumns =
    "episode,train_return,cumulative_avg_return,greedy_success_rate,n_state_leaves,n_apt_leaves_total,beta,"
    "wall_time_s";

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);
/// Throws MalformedInput.
std::vector<MetricsRow> read_metrics_csv(std::istream& in);
std::vector<MetricsRow> read_metrics_csv(const std::string& path);

/// Whether every field other than wall_time_s matches.
bool same_learning_stream(const std::vector<MetricsRow>& a, const std::vector<MetricsRow>& b);

}  // namespace pearl
