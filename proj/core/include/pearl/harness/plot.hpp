#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pearl/abstraction/spacat.hpp"
#include "pearl/harness/suite.hpp"
#include "pearl/learner/qtable.hpp"

namespace pearl {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> mean;
    std::vector<double> sd;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::optional<std::pair<double, double>> y_range;
};

/// Mean line with a mean +/- SD band per series. Band polygons carry
/// class="band", mean polylines class="mean".
std::string render_chart(const Chart& chart);

Series return_series(const std::vector<AggregateRow>& rows);
/// Only episodes that carry an evaluation.
Series success_series(const std::vector<AggregateRow>& rows);

struct MapOptions {
    int x_dim = -1;  ///< -1 selects the first continuous variable
    int y_dim = -1;  ///< -1 selects the second continuous variable
    /// Values for the remaining variables; defaults to each lower bound.
    std::vector<double> fixed;
    int resolution = 120;
};

struct AbstractionMap {
    std::string svg;
    /// Distinct leaves visible in the slice.
    int regions = 0;
};

/// Colours each leaf region of a 2-D slice; with a Q-table each region is
/// annotated with its greedy action and parameter interval.
AbstractionMap render_abstraction_map(const SpaCat& tree, const QTable* q, const MapOptions& options = {});

/// Reads aggregate.csv, metrics.csv or seed_*/metrics.csv under `metrics_dir`
/// and writes return.svg, success.svg and (when a tree dump is found)
/// abstraction_map.svg into `out_dir`. Returns the written paths.
/// Throws MalformedInput.
std::vector<std::string> emit_plots(const std::string& metrics_dir, const std::string& out_dir);

}  // namespace pearl
