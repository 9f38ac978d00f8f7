#include "pearl/harness/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "pearl/core/error.hpp"
#include "pearl/envs/registry.hpp"

namespace pearl {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* to_string(ClusterFeatures f) { return f == ClusterFeatures::score ? "score" : "state_and_score"; }

ClusterFeatures parse_features(const std::string& s) {
    if (s == "score") return ClusterFeatures::score;
    if (s == "state_and_score") return ClusterFeatures::state_and_score;
    throw ConfigError("unknown cluster_features '" + s + "'");
}

template <typename T>
T field(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field '") + key + "' has the wrong type: " + doc.at(key).dump());
    }
}

template <typename T>
T integral_field(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number_integer()) throw ConfigError(std::string("field '") + key + "' must be an integer");
    return v.get<T>();
}

}  // namespace

RefinementParams ExperimentConfig::refinement_params(std::uint64_t seed) const {
    RefinementParams p;
    p.mode = mode;
    p.k_cap = k_cap;
    p.k_cap_actions = k_cap_actions;
    p.max_clusters = max_clusters;
    p.variables_to_split = variables_to_split;
    p.kernel = kernel;
    p.linkage = linkage;
    p.cluster_features = cluster_features;
    p.max_cluster_points = max_cluster_points;
    p.backfill = backfill;
    p.min_samples = min_samples;
    p.segment_discount = segment_discount;
    p.seed = seed;
    return p;
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError(what); };
    const auto& names = env_names();
    if (std::find(names.begin(), names.end(), env) == names.end()) fail("unknown env '" + env + "'");
    if (n_epi < 0) fail("n_epi must be non-negative");
    if (n_refine < 0) fail("n_refine must be non-negative");
    if (horizon < 1) fail("h must be positive");
    if (!(gamma >= 0.0 && gamma <= 1.0)) fail("gamma must lie in [0, 1]");
    if (!(alpha > 0.0 && alpha <= 1.0)) fail("alpha must lie in (0, 1]");
    if (!(lambda >= 0.0 && lambda <= 1.0)) fail("lambda must lie in [0, 1]");
    if (!(epsilon_min >= 0.0 && epsilon_min <= 1.0)) fail("epsilon_min must lie in [0, 1]");
    if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0)) fail("epsilon_decay must lie in (0, 1]");
    if (k_cap < 0 || k_cap_actions < 0) fail("k_cap and k_cap_actions must be non-negative");
    if (max_clusters < 1) fail("max_clusters must be positive");
    if (variables_to_split < 1) fail("variables_to_split must be positive");
    if (max_cluster_points < 2) fail("max_cluster_points must be at least 2");
    if (backfill < 0) fail("backfill must be non-negative");
    if (min_samples < 2) fail("min_samples must be at least 2");
    if (!(beta_initial >= 0.0 && beta_initial <= 1.0) || !(similarity_beta_initial >= 0.0 && similarity_beta_initial <= 1.0)) {
        fail("beta initial values must lie in [0, 1]");
    }
    if (beta_decay < 0.0 || similarity_beta_decay < 0.0) fail("beta decays must be non-negative");
    if (eval_every < 0) fail("eval_every must be non-negative");
    if (eval_episodes < 1) fail("eval_episodes must be positive");
    if (seeds.empty()) fail("seeds must not be empty");
}

ExperimentConfig default_config(const std::string& env, RefinementMode mode) {
    ExperimentConfig c;
    c.env = env;
    c.n_refine = 100;
    c.mode = mode;
    const bool flexible = mode == RefinementMode::flexible;
    if (env == "office") {
        c.horizon = 400;
        c.gamma = 0.99;
        c.alpha = 0.05;
        c.lambda = 0.1;
        c.epsilon_decay = 0.9989;
        c.k_cap = flexible ? 2 : 5;
        c.k_cap_actions = flexible ? 3 : 5;
        c.max_clusters = 3;
        c.variables_to_split = 4;
        c.kernel = statlearn::KernelChoice::linear;
    } else if (env == "pinball") {
        c.horizon = 600;
        c.gamma = 0.999;
        c.alpha = 0.1;
        c.lambda = 0.1;
        c.epsilon_decay = 0.9997;
        c.k_cap = 40;
        c.k_cap_actions = 15;
        c.max_clusters = 4;
        c.variables_to_split = 2;
        c.kernel = statlearn::KernelChoice::rbf;
    } else if (env == "multicity") {
        c.horizon = 400;
        c.gamma = 0.99;
        c.alpha = 0.05;
        c.lambda = 0.1;
        c.epsilon_decay = 0.9989;
        c.k_cap = 10;
        c.k_cap_actions = 10;
        c.max_clusters = 8;
        c.variables_to_split = 4;
        c.kernel = statlearn::KernelChoice::linear;
    } else if (env == "soccer") {
        c.horizon = 150;
        c.gamma = 0.99;
        c.alpha = 0.05;
        c.lambda = 0.0;
        c.epsilon_decay = 0.9989;
        c.k_cap = flexible ? 25 : 10;
        c.k_cap_actions = flexible ? 25 : 10;
        c.max_clusters = 20;
        c.variables_to_split = 2;
        c.kernel = statlearn::KernelChoice::linear;
    } else if (env == "corridor") {
        c.n_epi = 2000;
        c.n_refine = 50;
        c.horizon = 15;
        c.gamma = 0.99;
        c.alpha = 0.1;
        c.lambda = 0.1;
        c.epsilon_decay = 0.995;
        c.k_cap = 1;
        c.k_cap_actions = 1;
        c.max_clusters = 2;
        c.variables_to_split = 1;
        c.eval_every = 50;
        c.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    } else {
        throw ConfigError("unknown env '" + env + "'");
    }
    c.epsilon_min = 0.05;
    c.beta_decay = 0.02;
    c.similarity_beta_decay = 0.02;
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    return {{"format", "pearl-config"},
            {"version", kConfigFormatVersion},
            {"env", c.env},
            {"layout", c.layout},
            {"refinement", to_string(c.mode)},
            {"n_epi", c.n_epi},
            {"n_refine", c.n_refine},
            {"h", c.horizon},
            {"gamma", c.gamma},
            {"alpha", c.alpha},
            {"lambda", c.lambda},
            {"epsilon_min", c.epsilon_min},
            {"epsilon_decay", c.epsilon_decay},
            {"k_cap", c.k_cap},
            {"k_cap_actions", c.k_cap_actions},
            {"max_clusters", c.max_clusters},
            {"variables_to_split", c.variables_to_split},
            {"kernel", statlearn::to_string(c.kernel)},
            {"linkage", statlearn::to_string(c.linkage)},
            {"cluster_features", to_string(c.cluster_features)},
            {"max_cluster_points", c.max_cluster_points},
            {"backfill", c.backfill},
            {"min_samples", c.min_samples},
            {"segment_discount", to_string(c.segment_discount)},
            {"beta_initial", c.beta_initial},
            {"beta_decay", c.beta_decay},
            {"similarity_beta_initial", c.similarity_beta_initial},
            {"similarity_beta_decay", c.similarity_beta_decay},
            {"redecide", c.redecide},
            {"resample_each_step", c.resample_each_step},
            {"eval_every", c.eval_every},
            {"eval_episodes", c.eval_episodes},
            {"seeds", c.seeds}};
}

ExperimentConfig config_from_json(const json& doc, const std::string& base_dir) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> kKeys{
        "format",        "version",          "env",           "layout",        "refinement",
        "n_epi",         "n_refine",         "h",             "gamma",         "alpha",
        "lambda",        "epsilon_min",      "epsilon_decay", "k_cap",         "k_cap_actions",
        "max_clusters",  "variables_to_split", "kernel",      "linkage",       "cluster_features",
        "max_cluster_points", "backfill", "min_samples", "segment_discount", "beta_initial", "beta_decay",   "similarity_beta_initial",
        "similarity_beta_decay", "redecide", "resample_each_step", "eval_every", "eval_episodes",
        "seeds"};
    for (const auto& [k, v] : doc.items()) {
        if (!kKeys.count(k)) throw ConfigError("unknown config key '" + k + "'");
    }
    if (doc.contains("format") && doc["format"] != "pearl-config") throw ConfigError("format must be \"pearl-config\"");
    if (doc.contains("version") && doc["version"] != kConfigFormatVersion) {
        throw ConfigError("unsupported config version " + doc["version"].dump());
    }

    const auto env = field<std::string>(doc, "env", "office");
    const auto mode = parse_refinement_mode(field<std::string>(doc, "refinement", "flexible"));
    ExperimentConfig c = default_config(env, mode);
    c.layout = field<std::string>(doc, "layout", "");
    if (!c.layout.empty() && !base_dir.empty() && fs::path(c.layout).is_relative()) {
        c.layout = (fs::path(base_dir) / c.layout).lexically_normal().string();
    }
    c.n_epi = integral_field(doc, "n_epi", c.n_epi);
    c.n_refine = integral_field(doc, "n_refine", c.n_refine);
    c.horizon = integral_field(doc, "h", c.horizon);
    c.gamma = field(doc, "gamma", c.gamma);
    c.alpha = field(doc, "alpha", c.alpha);
    c.lambda = field(doc, "lambda", c.lambda);
    c.epsilon_min = field(doc, "epsilon_min", c.epsilon_min);
    c.epsilon_decay = field(doc, "epsilon_decay", c.epsilon_decay);
    c.k_cap = integral_field(doc, "k_cap", c.k_cap);
    c.k_cap_actions = integral_field(doc, "k_cap_actions", c.k_cap_actions);
    c.max_clusters = integral_field(doc, "max_clusters", c.max_clusters);
    c.variables_to_split = integral_field(doc, "variables_to_split", c.variables_to_split);
    try {
        if (doc.contains("kernel")) c.kernel = statlearn::parse_kernel(field<std::string>(doc, "kernel", ""));
        if (doc.contains("linkage")) c.linkage = statlearn::parse_linkage(field<std::string>(doc, "linkage", ""));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (doc.contains("cluster_features")) c.cluster_features = parse_features(field<std::string>(doc, "cluster_features", ""));
    c.max_cluster_points = integral_field(doc, "max_cluster_points", c.max_cluster_points);
    c.backfill = integral_field(doc, "backfill", c.backfill);
    c.min_samples = integral_field(doc, "min_samples", c.min_samples);
    if (doc.contains("segment_discount")) {
        try {
            c.segment_discount = parse_segment_discount(field<std::string>(doc, "segment_discount", ""));
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
        }
    }
    c.beta_initial = field(doc, "beta_initial", c.beta_initial);
    c.beta_decay = field(doc, "beta_decay", c.beta_decay);
    c.similarity_beta_initial = field(doc, "similarity_beta_initial", c.similarity_beta_initial);
    c.similarity_beta_decay = field(doc, "similarity_beta_decay", c.similarity_beta_decay);
    c.redecide = field(doc, "redecide", c.redecide);
    c.resample_each_step = field(doc, "resample_each_step", c.resample_each_step);
    c.eval_every = integral_field(doc, "eval_every", c.eval_every);
    c.eval_episodes = integral_field(doc, "eval_episodes", c.eval_episodes);
    if (doc.contains("seeds")) {
        const auto& s = doc["seeds"];
        if (s.is_string()) {
            c.seeds = parse_seed_list(s.get<std::string>());
        } else {
            c.seeds = field<std::vector<std::uint64_t>>(doc, "seeds", {});
        }
    }
    c.validate();
    return c;
}

void apply_overrides(json& doc, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "' is not key=value");
        const std::string key = o.substr(0, eq);
        const std::string value = o.substr(eq + 1);
        json parsed = json::parse(value, nullptr, false);
        doc[key] = parsed.is_discarded() ? json(value) : parsed;
    }
}

std::string resolve_config_path(const std::string& path_or_name) {
    if (fs::exists(path_or_name)) return path_or_name;
    const fs::path shipped = fs::path(data_dir()) / "configs" / (path_or_name + ".json");
    if (fs::exists(shipped)) return shipped.string();
    throw ConfigError("no config file or shipped config named '" + path_or_name + "'");
}

ExperimentConfig load_config(const std::string& path_or_name, const std::vector<std::string>& overrides) {
    const std::string path = resolve_config_path(path_or_name);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config '" + path + "' is not valid JSON");
    apply_overrides(doc, overrides);
    return config_from_json(doc, fs::path(path).parent_path().string());
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    auto number = [&](const std::string& s) -> std::uint64_t {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
            throw ConfigError("bad seed list '" + text + "'");
        }
        return std::stoull(s);
    };
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const auto lo = number(text.substr(0, dots));
        const auto hi = number(text.substr(dots + 2));
        if (hi < lo) throw ConfigError("bad seed range '" + text + "'");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        out.push_back(number(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace pearl
