#include "pearl/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pearl/core/error.hpp"
#include "pearl/envs/registry.hpp"
#include "pearl/learner/execute.hpp"
#include "pearl/learner/policy.hpp"
#include "pearl/learner/td.hpp"

namespace pearl {

namespace {

constexpr std::uint64_t kPolicyStream = 1;
constexpr std::uint64_t kExecStream = 2;
constexpr std::uint64_t kEpisodeStream = 3;
constexpr std::uint64_t kEvalStream = 4;
constexpr std::uint64_t kRefineStream = 5;

bool run_greedy_episode(Env& env, const SpaCat& tree, const QTable& q, std::uint64_t seed, Rng& policy_rng,
                        Rng& exec_rng, const EvalOptions& options) {
    env.reset(seed);
    const Redecide redecide = [&](int leaf) { return epsilon_greedy(q, tree, leaf, 0.0, policy_rng); };
    ExecuteOptions exec{options.resample_each_step, options.redecide ? &redecide : nullptr};
    AbstractAction a = epsilon_greedy(q, tree, tree.leaf_of(env.state()), 0.0, policy_rng);
    while (!env.done()) {
        Segment seg = execute_abstract(env, tree, a, exec_rng, env.horizon() - env.steps_taken(), exec);
        if (seg.episode_done) return seg.goal_reached;
        a = seg.next_action ? *seg.next_action : epsilon_greedy(q, tree, seg.abstract.next_leaf, 0.0, policy_rng);
    }
    return false;
}

}  // namespace

std::unique_ptr<Env> make_configured_env(const ExperimentConfig& cfg) {
    auto env = make_env(cfg.env, cfg.layout);
    env->set_horizon(cfg.horizon);
    env->set_gamma(cfg.gamma);
    return env;
}

double evaluate_greedy(const Env& env, const SpaCat& tree, const QTable& q, int episodes, std::uint64_t seed,
                       const EvalOptions& options) {
    if (episodes < 1) throw InvalidArgument("evaluate_greedy needs episodes >= 1");
    auto e = env.clone();
    Rng policy_rng(mix_seed(seed, kPolicyStream));
    Rng exec_rng(mix_seed(seed, kExecStream));
    int wins = 0;
    for (int i = 0; i < episodes; ++i) {
        const auto episode_seed = mix_seed(mix_seed(seed, kEpisodeStream), static_cast<std::uint64_t>(i));
        if (run_greedy_episode(*e, tree, q, episode_seed, policy_rng, exec_rng, options)) ++wins;
    }
    return static_cast<double>(wins) / static_cast<double>(episodes);
}

RunResult run_experiment(const ExperimentConfig& cfg, std::uint64_t seed, const EpisodeObserver& observer) {
    cfg.validate();
    auto env = make_configured_env(cfg);
    const auto start = std::chrono::steady_clock::now();

    RunResult out{{}, SpaCat(env->state_space(), env->actions()), {}, {}, {}};
    SpaCat& tree = out.tree;
    QTable& q = out.q;
    EligibilityTraces traces;
    TraceBuffers buffers;
    EpsilonSchedule eps{1.0, cfg.epsilon_decay, cfg.epsilon_min};
    BetaSchedule h_beta = BetaSchedule::make(cfg.beta_initial, cfg.beta_decay);
    BetaSchedule s_beta = BetaSchedule::make(cfg.similarity_beta_initial, cfg.similarity_beta_decay);
    const RefinementParams rparams = cfg.refinement_params(mix_seed(seed, kRefineStream));

    Rng policy_rng(mix_seed(seed, kPolicyStream));
    Rng exec_rng(mix_seed(seed, kExecStream));
    const std::uint64_t episode_base = mix_seed(seed, kEpisodeStream);
    const std::uint64_t eval_base = mix_seed(seed, kEvalStream);

    const Redecide redecide = [&](int leaf) { return epsilon_greedy(q, tree, leaf, eps.epsilon, policy_rng); };
    const ExecuteOptions exec{cfg.resample_each_step, cfg.redecide ? &redecide : nullptr};
    const EvalOptions eval_opts{cfg.redecide, cfg.resample_each_step};

    double return_sum = 0.0;
    int phase = 0;
    out.metrics.reserve(static_cast<std::size_t>(cfg.n_epi));
    for (int episode = 1; episode <= cfg.n_epi; ++episode) {
        env->reset(mix_seed(episode_base, static_cast<std::uint64_t>(episode)));
        traces.clear();
        double episode_return = 0.0;
        AbstractAction a = epsilon_greedy(q, tree, tree.leaf_of(env->state()), eps.epsilon, policy_rng);
        while (!env->done()) {
            Segment seg = execute_abstract(*env, tree, a, exec_rng, env->horizon() - env->steps_taken(), exec);
            td_lambda_update(q, traces, tree, seg.abstract, cfg.alpha, cfg.gamma, cfg.lambda, cfg.segment_discount);
            // Self-transitions cut the traces.
            if (!seg.abstract.done && seg.abstract.next_leaf == seg.abstract.leaf) traces.clear();
            episode_return += seg.reward_sum;
            buffers.abstract_buf.push_back(seg.abstract);
            for (auto& c : seg.concrete) buffers.concrete_buf.push_back(std::move(c));
            if (seg.episode_done) break;
            a = seg.next_action ? *seg.next_action
                                : epsilon_greedy(q, tree, seg.abstract.next_leaf, eps.epsilon, policy_rng);
        }
        eps.step();
        return_sum += episode_return;

        MetricsRow row;
        row.episode = episode;
        row.train_return = episode_return;
        row.cumulative_avg_return = return_sum / static_cast<double>(episode);
        if (cfg.eval_every > 0 && episode % cfg.eval_every == 0) {
            row.greedy_success_rate = evaluate_greedy(*env, tree, q, cfg.eval_episodes,
                                                      mix_seed(eval_base, static_cast<std::uint64_t>(episode)),
                                                      eval_opts);
        }

        if (cfg.refinement_enabled() && episode % cfg.n_refine == 0) {
            out.reports.push_back(refine_phase(tree, q, buffers, rparams, h_beta, s_beta, cfg.gamma, ++phase));
            out.refinement_episodes.push_back(episode);
            buffers.clear();
        }
        row.n_state_leaves = tree.num_leaves();
        row.n_apt_leaves_total = tree.total_apt_leaves();
        row.beta = h_beta.beta;
        row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.metrics.push_back(row);
        if (observer) observer(row);
    }
    return out;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
    out << kMetricsHeaderComment << '\n' << kMetricsColumns << '\n';
    out << std::setprecision(17);
    for (const auto& r : rows) {
        out << r.episode << ',' << r.train_return << ',' << r.cumulative_avg_return << ',';
        if (r.greedy_success_rate) out << *r.greedy_success_rate;
        out << ',' << r.n_state_leaves << ',' << r.n_apt_leaves_total << ',' << r.beta << ',' << r.wall_time_s << '\n';
    }
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    write_metrics_csv(out, rows);
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
    std::vector<MetricsRow> rows;
    std::string line;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != kMetricsColumns) throw MalformedInput("unexpected metrics header: " + line);
            header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (cells.size() != 8) throw MalformedInput("line " + std::to_string(lineno) + ": expected 8 columns");
        try {
            MetricsRow r;
            r.episode = std::stoi(cells[0]);
            r.train_return = std::stod(cells[1]);
            r.cumulative_avg_return = std::stod(cells[2]);
            if (!cells[3].empty()) r.greedy_success_rate = std::stod(cells[3]);
            r.n_state_leaves = std::stoul(cells[4]);
            r.n_apt_leaves_total = std::stoul(cells[5]);
            r.beta = std::stod(cells[6]);
            r.wall_time_s = std::stod(cells[7]);
            rows.push_back(r);
        } catch (const std::logic_error&) {
            throw MalformedInput("line " + std::to_string(lineno) + ": bad number");
        }
    }
    if (!header) throw MalformedInput("metrics header missing");
    return rows;
}

std::vector<MetricsRow> read_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open '" + path + "'");
    return read_metrics_csv(in);
}

bool same_learning_stream(const std::vector<MetricsRow>& a, const std::vector<MetricsRow>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a[i];
        const auto& y = b[i];
        if (x.episode != y.episode || x.train_return != y.train_return ||
            x.cumulative_avg_return != y.cumulative_avg_return || x.greedy_success_rate != y.greedy_success_rate ||
            x.n_state_leaves != y.n_state_leaves || x.n_apt_leaves_total != y.n_apt_leaves_total || x.beta != y.beta) {
            return false;
        }
    }
    return true;
}

}  // namespace pearl
