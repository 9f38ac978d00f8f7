#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pearl/harness/config.hpp"
#include "pearl/harness/experiment.hpp"

namespace pearl {

struct Stat {
    double mean = 0.0;
    double sd = 0.0;  ///< population SD across seeds
};

struct AggregateRow {
    int episode = 0;
    Stat train_return;
    Stat cumulative_avg_return;
    std::optional<Stat> greedy_success_rate;  ///< over seeds that evaluated at this episode
    Stat n_state_leaves;
    Stat n_apt_leaves_total;
};

/// Per-episode mean and SD across runs, truncated to the shortest run.
std::vector<AggregateRow> aggregate_metrics(const std::vector<std::vector<MetricsRow>>& runs);

inline constexpr const char* kAggregateColumns =
    "episode,train_return_mean,train_return_sd,cumulative_avg_return_mean,cumulative_avg_return_sd,"
    "greedy_success_rate_mean,greedy_success_rate_sd,n_state_leaves_mean,n_state_leaves_sd,"
    "n_apt_leaves_total_mean,n_apt_leaves_total_sd";

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows);
/// Throws MalformedInput.
std::vector<AggregateRow> read_aggregate_csv(std::istream& in);
std::vector<AggregateRow> read_aggregate_csv(const std::string& path);

struct SuiteOptions {
    /// 0 picks the hardware concurrency.
    unsigned threads = 0;
    /// When set, each seed's checkpoint goes to out_dir/seed_<n>/ and the
    /// aggregate to out_dir/aggregate.csv.
    std::string out_dir;
};

struct SuiteResult {
    std::vector<std::uint64_t> seeds;
    std::vector<RunResult> runs;  ///< in seed order
    std::vector<AggregateRow> aggregate;
};

/// Runs every seed (in parallel workers) and aggregates them in seed order.
SuiteResult run_suite(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& seeds,
                      const SuiteOptions& options = {});

/// Writes metrics.csv, tree.dump, qtable.dump, refinement.log and
/// config.json into `dir` (created if needed).
void write_checkpoint(const std::string& dir, const ExperimentConfig& cfg, const RunResult& run);

struct Checkpoint {
    ExperimentConfig config;
    SpaCat tree;
    QTable q;
};

/// Throws MalformedInput, MalformedTree or ConfigError.
Checkpoint load_checkpoint(const std::string& dir);

}  // namespace pearl
