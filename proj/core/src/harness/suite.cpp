#include "pearl/harness/suite.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "pearl/abstraction/serialize.hpp"
#include "pearl/core/error.hpp"

namespace pearl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Stat stat_of(const std::vector<double>& v) {
    Stat s;
    if (v.empty()) return s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size()));
    return s;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw MalformedInput("cannot open '" + p.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw Error("cannot write '" + p.string() + "'");
    out << text;
}

}  // namespace

std::vector<AggregateRow> aggregate_metrics(const std::vector<std::vector<MetricsRow>>& runs) {
    std::vector<AggregateRow> out;
    if (runs.empty()) return out;
    std::size_t n = runs.front().size();
    for (const auto& r : runs) n = std::min(n, r.size());
    out.reserve(n);
    std::vector<double> ret, cum, succ, leaves, apts;
    for (std::size_t i = 0; i < n; ++i) {
        for (auto* v : {&ret, &cum, &succ, &leaves, &apts}) v->clear();
        for (const auto& r : runs) {
            const auto& row = r[i];
            ret.push_back(row.train_return);
            cum.push_back(row.cumulative_avg_return);
            if (row.greedy_success_rate) succ.push_back(*row.greedy_success_rate);
            leaves.push_back(static_cast<double>(row.n_state_leaves));
            apts.push_back(static_cast<double>(row.n_apt_leaves_total));
        }
        AggregateRow a;
        a.episode = runs.front()[i].episode;
        a.train_return = stat_of(ret);
        a.cumulative_avg_return = stat_of(cum);
        if (!succ.empty()) a.greedy_success_rate = stat_of(succ);
        a.n_state_leaves = stat_of(leaves);
        a.n_apt_leaves_total = stat_of(apts);
        out.push_back(a);
    }
    return out;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
    out << "# pearl-aggregate v1\n" << kAggregateColumns << '\n' << std::setprecision(17);
    for (const auto& r : rows) {
        out << r.episode << ',' << r.train_return.mean << ',' << r.train_return.sd << ','
            << r.cumulative_avg_return.mean << ',' << r.cumulative_avg_return.sd << ',';
        if (r.greedy_success_rate) out << r.greedy_success_rate->mean << ',' << r.greedy_success_rate->sd;
        else out << ',';
        out << ',' << r.n_state_leaves.mean << ',' << r.n_state_leaves.sd << ',' << r.n_apt_leaves_total.mean << ','
            << r.n_apt_leaves_total.sd << '\n';
    }
}

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    write_aggregate_csv(out, rows);
}

std::vector<AggregateRow> read_aggregate_csv(std::istream& in) {
    std::vector<AggregateRow> rows;
    std::string line;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != kAggregateColumns) throw MalformedInput("unexpected aggregate header: " + line);
            header = true;
            continue;
        }
        std::vector<std::string> c;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) c.push_back(cell);
        if (c.size() != 11) throw MalformedInput("line " + std::to_string(lineno) + ": expected 11 columns");
        try {
            AggregateRow r;
            r.episode = std::stoi(c[0]);
            r.train_return = {std::stod(c[1]), std::stod(c[2])};
            r.cumulative_avg_return = {std::stod(c[3]), std::stod(c[4])};
            if (!c[5].empty()) r.greedy_success_rate = Stat{std::stod(c[5]), std::stod(c[6])};
            r.n_state_leaves = {std::stod(c[7]), std::stod(c[8])};
            r.n_apt_leaves_total = {std::stod(c[9]), std::stod(c[10])};
            rows.push_back(r);
        } catch (const std::logic_error&) {
            throw MalformedInput("line " + std::to_string(lineno) + ": bad number");
        }
    }
    if (!header) throw MalformedInput("aggregate header missing");
    return rows;
}

std::vector<AggregateRow> read_aggregate_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open '" + path + "'");
    return read_aggregate_csv(in);
}

SuiteResult run_suite(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& seeds,
                      const SuiteOptions& options) {
    if (seeds.empty()) throw ConfigError("run_suite needs at least one seed");
    cfg.validate();
    SuiteResult result;
    result.seeds = seeds;
    std::vector<std::optional<RunResult>> slots(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            try {
                slots[i] = run_experiment(cfg, seeds[i]);
                if (!options.out_dir.empty()) {
                    write_checkpoint((fs::path(options.out_dir) / ("seed_" + std::to_string(seeds[i]))).string(), cfg,
                                     *slots[i]);
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(seeds.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<std::vector<MetricsRow>> streams;
    for (auto& s : slots) {
        streams.push_back(s->metrics);
        result.runs.push_back(std::move(*s));
    }
    result.aggregate = aggregate_metrics(streams);
    if (!options.out_dir.empty()) {
        write_aggregate_csv((fs::path(options.out_dir) / "aggregate.csv").string(), result.aggregate);
    }
    return result;
}

void write_checkpoint(const std::string& dir, const ExperimentConfig& cfg, const RunResult& run) {
    const fs::path d(dir);
    fs::create_directories(d);
    write_metrics_csv((d / "metrics.csv").string(), run.metrics);
    write_file(d / "tree.dump", tree_serialize(run.tree));
    write_file(d / "qtable.dump", qtable_to_json(run.q, run.tree.actions()).dump(1));
    std::string log;
    for (const auto& r : run.reports) log += to_json(r).dump() + "\n";
    write_file(d / "refinement.log", log);
    auto cj = config_to_json(cfg);
    if (!cfg.layout.empty()) cj["layout"] = fs::absolute(cfg.layout).lexically_normal().string();
    write_file(d / "config.json", cj.dump(2) + "\n");
}

Checkpoint load_checkpoint(const std::string& dir) {
    const fs::path d(dir);
    json cfg_doc = json::parse(read_file(d / "config.json"), nullptr, false);
    if (cfg_doc.is_discarded()) throw MalformedInput("config.json in '" + dir + "' is not valid JSON");
    ExperimentConfig cfg = config_from_json(cfg_doc, d.string());
    SpaCat tree = tree_deserialize(read_file(d / "tree.dump"));
    json q_doc = json::parse(read_file(d / "qtable.dump"), nullptr, false);
    if (q_doc.is_discarded()) throw MalformedInput("qtable.dump in '" + dir + "' is not valid JSON");
    QTable q = qtable_from_json(q_doc, tree.actions());
    return {std::move(cfg), std::move(tree), std::move(q)};
}

}  // namespace pearl
