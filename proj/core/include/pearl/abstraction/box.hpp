#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pearl/core/types.hpp"

namespace pearl {

/// Half-open interval [lo, hi). Discrete intervals hold the integer codes
/// lo..hi-1.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    VarKind kind = VarKind::continuous;

    [[nodiscard]] bool contains(double v) const { return v >= lo && v < hi; }
    [[nodiscard]] double width() const { return hi - lo; }
    /// Split point: midpoint for continuous, lo + ceil(k/2) for k discrete codes.
    [[nodiscard]] double split_point() const;
    /// Whether bisection yields two non-empty halves and, for continuous
    /// intervals, the width exceeds `min_width`.
    [[nodiscard]] bool splittable(double min_width) const;

    friend bool operator==(const Interval&, const Interval&) = default;
};

using Box = std::vector<Interval>;

Box box_of(std::span<const VariableSpec> specs);
bool box_contains(const Box& box, std::span<const double> point);

/// Per-dimension guard against endless refinement: 1e-3 of the domain width.
std::vector<double> min_widths_of(std::span<const VariableSpec> specs, double fraction = 1e-3);

/// Description of an axis-aligned bisection over a subset of dimensions.
/// Child c of the split lies in the upper half of dims[i] iff bit i of c is set.
struct UniformSplit {
    std::vector<int> dims;
    std::vector<double> mids;

    [[nodiscard]] std::size_t child_index(std::span<const double> point) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < dims.size(); ++i) {
            if (point[static_cast<std::size_t>(dims[i])] >= mids[i]) idx |= std::size_t{1} << i;
        }
        return idx;
    }

    /// Cross-product child boxes in child-index order.
    [[nodiscard]] std::vector<Box> child_boxes(const Box& parent) const;
};

}  // namespace pearl
