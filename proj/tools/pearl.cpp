#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pearl/abstraction/serialize.hpp"
#include "pearl/core/error.hpp"
#include "pearl/envs/layout.hpp"
#include "pearl/harness/config.hpp"
#include "pearl/harness/experiment.hpp"
#include "pearl/harness/plot.hpp"
#include "pearl/harness/suite.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_train(const std::string& config, const std::string& seeds, const std::string& out,
              const std::vector<std::string>& overrides, unsigned threads) {
    auto cfg = pearl::load_config(config, overrides);
    if (!seeds.empty()) cfg.seeds = pearl::parse_seed_list(seeds);
    pearl::SuiteOptions opts;
    opts.threads = threads;
    opts.out_dir = out;
    fs::create_directories(out);
    const auto result = pearl::run_suite(cfg, cfg.seeds, opts);
    for (std::size_t i = 0; i < result.seeds.size(); ++i) {
        const auto& m = result.runs[i].metrics;
        std::optional<double> last_success;
        for (const auto& row : m) {
            if (row.greedy_success_rate) last_success = row.greedy_success_rate;
        }
        std::cout << "seed " << result.seeds[i] << ": episodes=" << m.size()
                  << " cumulative_avg_return=" << (m.empty() ? 0.0 : m.back().cumulative_avg_return)
                  << " greedy_success=" << (last_success ? std::to_string(*last_success) : std::string("n/a"))
                  << " state_leaves=" << result.runs[i].tree.num_leaves()
                  << " apt_leaves=" << result.runs[i].tree.total_apt_leaves() << '\n';
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_eval(const std::string& checkpoint, int episodes, std::uint64_t seed) {
    const auto ck = pearl::load_checkpoint(checkpoint);
    const auto env = pearl::make_configured_env(ck.config);
    const double rate = pearl::evaluate_greedy(*env, ck.tree, ck.q, episodes, seed,
                                               {ck.config.redecide, ck.config.resample_each_step});
    std::cout << "greedy_success_rate " << rate << " over " << episodes << " episodes\n";
    return 0;
}

int cmd_plot(const std::string& metrics, const std::string& out) {
    for (const auto& p : pearl::emit_plots(metrics, out)) std::cout << "wrote " << p << '\n';
    return 0;
}

int cmd_validate(const std::string& path) {
    const auto layout = pearl::load_layout(path);
    std::cout << path << ": valid " << layout.kind << " layout '" << layout.name << "' (" << layout.walls.size()
              << " walls, " << layout.stations.size() << " stations, " << layout.obstacles.size() << " obstacles)\n";
    return 0;
}

void print_tree(const pearl::SpaCat& tree, int id, int indent) {
    const auto& n = tree.node(id);
    std::cout << std::string(static_cast<std::size_t>(indent) * 2, ' ') << "node " << id;
    if (n.cell_label >= 0) std::cout << " (cell " << n.cell_label << ")";
    std::cout << " [";
    for (std::size_t d = 0; d < n.bounds.size(); ++d) {
        std::cout << (d ? " x " : "") << tree.state_space()[d].name << ":[" << n.bounds[d].lo << "," << n.bounds[d].hi
                  << ")";
    }
    std::cout << "] " << pearl::to_string(n.split);
    if (n.is_leaf()) {
        std::cout << " apt_leaves=";
        for (std::size_t a = 0; a < n.apts.size(); ++a) {
            std::cout << (a ? "," : "") << tree.actions()[a].label << ":" << n.apts[a].leaves().size();
        }
    }
    std::cout << '\n';
    for (int c : n.children) print_tree(tree, c, indent + 1);
}

int cmd_dump_tree(const std::string& checkpoint, bool json) {
    fs::path p(checkpoint);
    if (fs::is_directory(p)) p /= "tree.dump";
    std::ifstream in(p);
    if (!in) throw pearl::MalformedInput("cannot open '" + p.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const auto tree = pearl::tree_deserialize(ss.str());
    if (json) {
        std::cout << pearl::tree_to_json(tree).dump(2) << '\n';
        return 0;
    }
    std::cout << "state leaves " << tree.num_leaves() << ", nodes " << tree.num_nodes() << ", apt leaves "
              << tree.total_apt_leaves() << '\n';
    print_tree(tree, 0, 0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Abstraction learning for parameterized-action RL"};
    app.require_subcommand(1);

    std::string config, seeds, out = "runs";
    std::vector<std::string> overrides;
    unsigned threads = 0;
    auto* train = app.add_subcommand("train", "Run the learning loop over one or more seeds");
    train->add_option("--config", config, "Config file or shipped config name (e.g. office_flexible)")->required();
    train->add_option("--seeds", seeds, "Seed list: 0..4, 1,3,5 or 7 (default: the config's seeds)");
    train->add_option("--out", out, "Output directory")->capture_default_str();
    train->add_option("--set", overrides, "Override a config field: key=value (repeatable)");
    train->add_option("--threads", threads, "Worker threads (0: hardware concurrency)");

    std::string checkpoint;
    int episodes = 100;
    std::uint64_t eval_seed = 12345;
    auto* eval = app.add_subcommand("eval", "Greedy success rate of a saved run");
    eval->add_option("--checkpoint", checkpoint, "A seed_<n> directory written by train")->required();
    eval->add_option("--episodes", episodes, "Evaluation episodes")->capture_default_str()->check(CLI::PositiveNumber);
    eval->add_option("--seed", eval_seed, "Evaluation seed")->capture_default_str();

    std::string metrics, plot_out;
    auto* plot = app.add_subcommand("plot", "Render SVG charts and the abstraction map");
    plot->add_option("--metrics", metrics, "Directory written by train (or one seed_<n> subdirectory)")->required();
    plot->add_option("--out", plot_out, "Output directory (default: the metrics directory)");

    std::string layout;
    auto* validate = app.add_subcommand("validate-layout", "Check a layout file");
    validate->add_option("layout", layout, "Layout file")->required();

    std::string tree_path;
    bool as_json = false;
    auto* dump = app.add_subcommand("dump-tree", "Print a saved abstraction tree");
    dump->add_option("--checkpoint", tree_path, "A seed_<n> directory or a tree.dump file")->required();
    dump->add_flag("--json", as_json, "Print the raw JSON document");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*train) return cmd_train(config, seeds, out, overrides, threads);
        if (*eval) return cmd_eval(checkpoint, episodes, eval_seed);
        if (*plot) return cmd_plot(metrics, plot_out);
        if (*validate) return cmd_validate(layout);
        if (*dump) return cmd_dump_tree(tree_path, as_json);
    } catch (const std::exception& e) {
        std::cerr << "pearl: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
