#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pearl/refinement/refine.hpp"

namespace pearl {

inline constexpr int kConfigFormatVersion = 1;

struct ExperimentConfig {
    std::string env = "office";
    /// Layout file; relative paths resolve against the config file's
    /// directory. Empty selects the shipped default layout.
    std::string layout;
    RefinementMode mode = RefinementMode::flexible;

    int n_epi = 10000;
    int n_refine = 100;
    int horizon = 400;
    double gamma = 0.99;
    double alpha = 0.05;
    double lambda = 0.1;
    double epsilon_min = 0.05;
    double epsilon_decay = 0.9989;

    int k_cap = 2;
    int k_cap_actions = 3;
    int max_clusters = 3;
    int variables_to_split = 4;
    statlearn::KernelChoice kernel = statlearn::KernelChoice::linear;
    statlearn::Linkage linkage = statlearn::Linkage::ward;
    ClusterFeatures cluster_features = ClusterFeatures::score;
    std::size_t max_cluster_points = 1200;
    /// Next-ranked leaves that may replace skipped flexible targets.
    int backfill = 8;
    /// Fewest concrete transitions a leaf needs for a flexible split.
    int min_samples = 30;
    /// Bootstrap discount of a collapsed segment.
    SegmentDiscount segment_discount = SegmentDiscount::per_step;

    double beta_initial = 1.0;
    double beta_decay = 0.02;
    double similarity_beta_initial = 1.0;
    double similarity_beta_decay = 0.02;

    /// Re-query the policy at every concrete step; a segment runs while the
    /// chosen abstract action stays the same.
    bool redecide = true;
    bool resample_each_step = true;

    int eval_every = 100;
    int eval_episodes = 20;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};

    [[nodiscard]] bool refinement_enabled() const {
        return n_refine > 0 && (k_cap > 0 || k_cap_actions > 0);
    }
    [[nodiscard]] RefinementParams refinement_params(std::uint64_t seed) const;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

/// Built-in defaults for an environment and refinement mode. Office,
/// Pinball, Multi-City and Soccer carry the reference hyperparameters.
ExperimentConfig default_config(const std::string& env, RefinementMode mode);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Fields absent from `doc` fall back to default_config(env, mode). Unknown
/// keys are rejected. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& doc, const std::string& base_dir = {});

/// Applies "key=value" overrides (value parsed as JSON when possible,
/// otherwise taken as a string) to a config document.
void apply_overrides(nlohmann::json& doc, const std::vector<std::string>& overrides);

/// Loads a config file, or a shipped config by name (e.g. "office_flexible").
ExperimentConfig load_config(const std::string& path_or_name, const std::vector<std::string>& overrides = {});

/// Resolves a shipped config name to its path; returns the argument when it
/// already names an existing file.
std::string resolve_config_path(const std::string& path_or_name);

/// Parses "0..4", "0,2,5" or "3".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace pearl
