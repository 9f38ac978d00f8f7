#include "pearl/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pearl/abstraction/serialize.hpp"
#include "pearl/core/error.hpp"
#include "pearl/learner/policy.hpp"

namespace pearl {

namespace fs = std::filesystem;

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 64;
constexpr double kRight = 16;
constexpr double kTop = 36;
constexpr double kBottom = 48;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
                          "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#dbdb8d"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw Error("cannot write '" + p.string() + "'");
    out << text;
}

}  // namespace

std::string render_chart(const Chart& chart) {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool any = false;
    for (const auto& s : chart.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double lo = s.mean[i] - s.sd[i];
            const double hi = s.mean[i] + s.sd[i];
            if (!any) {
                x0 = x1 = s.x[i];
                y0 = lo;
                y1 = hi;
                any = true;
            }
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, lo);
            y1 = std::max(y1, hi);
        }
    }
    if (chart.y_range) std::tie(y0, y1) = *chart.y_range;
    if (x1 <= x0) x1 = x0 + 1;
    if (y1 <= y0) y1 = y0 + 1;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(chart.title)
       << "</text>\n";
    os << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
       << "\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph << "\"/>\n";
    os << "</g>\n<g font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0;
        const double yv = y0 + (y1 - y0) * i / 4.0;
        os << "<text x=\"" << px(xv) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << fmt(xv)
           << "</text>\n";
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv)
           << "</text>\n";
    }
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
       << escape(chart.x_label) << "</text>\n";
    os << "<text x=\"14\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << kTop + ph / 2 << ")\">" << escape(chart.y_label) << "</text>\n</g>\n";

    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const auto& s = chart.series[k];
        if (s.x.empty()) continue;
        const char* colour = kPalette[k % kPaletteSize];
        os << "<polygon class=\"band\" data-series=\"" << escape(s.label) << "\" fill=\"" << colour
           << "\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) os << px(s.x[i]) << ',' << py(s.mean[i] + s.sd[i]) << ' ';
        for (std::size_t i = s.x.size(); i-- > 0;) os << px(s.x[i]) << ',' << py(s.mean[i] - s.sd[i]) << ' ';
        os << "\"/>\n";
        os << "<polyline class=\"mean\" data-series=\"" << escape(s.label) << "\" fill=\"none\" stroke=\"" << colour
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) os << px(s.x[i]) << ',' << py(s.mean[i]) << ' ';
        os << "\"/>\n";
        os << "<text x=\"" << kLeft + 8 << "\" y=\"" << kTop + 14 + 14 * k << "\" font-size=\"11\" fill=\"" << colour
           << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

Series return_series(const std::vector<AggregateRow>& rows) {
    Series s{"cumulative average return", {}, {}, {}};
    for (const auto& r : rows) {
        s.x.push_back(r.episode);
        s.mean.push_back(r.cumulative_avg_return.mean);
        s.sd.push_back(r.cumulative_avg_return.sd);
    }
    return s;
}

Series success_series(const std::vector<AggregateRow>& rows) {
    Series s{"greedy success rate", {}, {}, {}};
    for (const auto& r : rows) {
        if (!r.greedy_success_rate) continue;
        s.x.push_back(r.episode);
        s.mean.push_back(r.greedy_success_rate->mean);
        s.sd.push_back(r.greedy_success_rate->sd);
    }
    return s;
}

AbstractionMap render_abstraction_map(const SpaCat& tree, const QTable* q, const MapOptions& options) {
    const auto& space = tree.state_space();
    int xd = options.x_dim;
    int yd = options.y_dim;
    for (std::size_t i = 0; i < space.size() && (xd < 0 || yd < 0); ++i) {
        if (space[i].kind != VarKind::continuous) continue;
        const int d = static_cast<int>(i);
        if (xd < 0) xd = d;
        else if (yd < 0 && d != xd) yd = d;
    }
    if (xd < 0) throw InvalidArgument("abstraction map needs a continuous variable");
    if (yd < 0) yd = xd;  // one continuous variable: a strip
    const int n = std::max(8, options.resolution);

    FactoredState s(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        s[i] = i < options.fixed.size() ? options.fixed[i] : space[i].lo;
    }
    const auto& vx = space[static_cast<std::size_t>(xd)];
    const auto& vy = space[static_cast<std::size_t>(yd)];
    std::vector<int> grid(static_cast<std::size_t>(n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            s[static_cast<std::size_t>(xd)] = vx.lo + (i + 0.5) / n * vx.width();
            if (yd != xd) s[static_cast<std::size_t>(yd)] = vy.lo + (j + 0.5) / n * vy.width();
            grid[static_cast<std::size_t>(j * n + i)] = tree.leaf_of(s);
        }
    }

    std::map<int, std::size_t> colour;
    std::map<int, std::pair<double, double>> centroid;
    std::map<int, int> count;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int leaf = grid[static_cast<std::size_t>(j * n + i)];
            colour.emplace(leaf, colour.size());
            centroid[leaf].first += i + 0.5;
            centroid[leaf].second += j + 0.5;
            ++count[leaf];
        }
    }

    const double size = 480;
    const double cell = size / n;
    const double margin = 30;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin << "\" height=\""
       << size + 2 * margin << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<g class=\"regions\" stroke=\"none\">\n";
    for (int j = 0; j < n; ++j) {
        int i = 0;
        while (i < n) {
            const int leaf = grid[static_cast<std::size_t>(j * n + i)];
            int run = 1;
            while (i + run < n && grid[static_cast<std::size_t>(j * n + i + run)] == leaf) ++run;
            os << "<rect data-leaf=\"" << leaf << "\" x=\"" << margin + i * cell << "\" y=\""
               << margin + (n - 1 - j) * cell << "\" width=\"" << run * cell + 0.01 << "\" height=\"" << cell + 0.01
               << "\" fill=\"" << kPalette[colour[leaf] % kPaletteSize] << "\"/>\n";
            i += run;
        }
    }
    os << "</g>\n<g font-size=\"10\" text-anchor=\"middle\">\n";
    for (const auto& [leaf, c] : count) {
        const double cx = margin + centroid[leaf].first / c * cell;
        const double cy = margin + size - centroid[leaf].second / c * cell;
        std::string label = "s" + std::to_string(leaf);
        if (q != nullptr) {
            const AbstractAction a = greedy_first(*q, tree, leaf);
            const auto& schema = tree.actions()[static_cast<std::size_t>(a.action)];
            label += ": " + schema.label;
            const auto& box = tree.apt(leaf, static_cast<std::size_t>(a.action)).node(a.apt_leaf).box;
            for (const auto& iv : box) label += " [" + fmt(iv.lo) + "," + fmt(iv.hi) + ")";
        }
        os << "<text class=\"annotation\" x=\"" << cx << "\" y=\"" << cy << "\">" << escape(label) << "</text>\n";
    }
    os << "</g>\n<text x=\"" << margin + size / 2 << "\" y=\"" << size + 2 * margin - 8
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(vx.name) << "</text>\n";
    os << "<text x=\"12\" y=\"" << margin + size / 2 << "\" font-size=\"12\" transform=\"rotate(-90 12 "
       << margin + size / 2 << ")\" text-anchor=\"middle\">" << escape(vy.name) << "</text>\n</svg>\n";
    return {os.str(), static_cast<int>(count.size())};
}

std::vector<std::string> emit_plots(const std::string& metrics_dir, const std::string& out_dir) {
    const fs::path dir(metrics_dir);
    if (!fs::is_directory(dir)) throw MalformedInput("'" + metrics_dir + "' is not a directory");

    std::vector<fs::path> seed_dirs;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_directory() && e.path().filename().string().rfind("seed_", 0) == 0 &&
            fs::exists(e.path() / "metrics.csv")) {
            seed_dirs.push_back(e.path());
        }
    }
    std::sort(seed_dirs.begin(), seed_dirs.end());

    std::vector<AggregateRow> rows;
    if (fs::exists(dir / "aggregate.csv")) {
        rows = read_aggregate_csv((dir / "aggregate.csv").string());
    } else if (fs::exists(dir / "metrics.csv")) {
        rows = aggregate_metrics({read_metrics_csv((dir / "metrics.csv").string())});
    } else if (!seed_dirs.empty()) {
        std::vector<std::vector<MetricsRow>> runs;
        for (const auto& d : seed_dirs) runs.push_back(read_metrics_csv((d / "metrics.csv").string()));
        rows = aggregate_metrics(runs);
    }

    const fs::path out(out_dir.empty() ? metrics_dir : out_dir);
    fs::create_directories(out);
    std::vector<std::string> written;

    Chart ret{"Cumulative average return", "episode", "return", {return_series(rows)}, std::nullopt};
    write_text(out / "return.svg", render_chart(ret));
    written.push_back((out / "return.svg").string());
    Chart succ{"Greedy success rate", "episode", "success rate", {success_series(rows)},
               std::make_pair(0.0, 1.0)};
    write_text(out / "success.svg", render_chart(succ));
    written.push_back((out / "success.svg").string());

    fs::path tree_dir;
    if (fs::exists(dir / "tree.dump")) tree_dir = dir;
    else if (!seed_dirs.empty() && fs::exists(seed_dirs.front() / "tree.dump")) tree_dir = seed_dirs.front();
    if (!tree_dir.empty()) {
        std::ifstream in(tree_dir / "tree.dump");
        std::stringstream ss;
        ss << in.rdbuf();
        const SpaCat tree = tree_deserialize(ss.str());
        std::optional<QTable> q;
        if (fs::exists(tree_dir / "qtable.dump")) {
            std::ifstream qin(tree_dir / "qtable.dump");
            auto doc = nlohmann::json::parse(qin, nullptr, false);
            if (doc.is_discarded()) throw MalformedInput("qtable.dump is not valid JSON");
            q = qtable_from_json(doc, tree.actions());
        }
        const auto map = render_abstraction_map(tree, q ? &*q : nullptr);
        write_text(out / "abstraction_map.svg", map.svg);
        written.push_back((out / "abstraction_map.svg").string());
    }
    return written;
}

}  // namespace pearl
