#include "pearl/abstraction/box.hpp"

#include <cmath>

namespace pearl {

double Interval::split_point() const {
    if (kind == VarKind::discrete) {
        const long k = static_cast<long>(std::llround(hi - lo));
        return lo + static_cast<double>((k + 1) / 2);
    }
    return lo + (hi - lo) / 2.0;
}

bool Interval::splittable(double min_width) const {
    if (kind == VarKind::discrete) return std::llround(hi - lo) >= 2;
    if (!(width() > min_width)) return false;
    const double mid = split_point();
    return mid > lo && mid < hi;
}

Box box_of(std::span<const VariableSpec> specs) {
    Box box;
    box.reserve(specs.size());
    for (const auto& s : specs) box.push_back({s.lo, s.hi, s.kind});
    return box;
}

bool box_contains(const Box& box, std::span<const double> point) {
    if (box.size() != point.size()) return false;
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (!box[i].contains(point[i])) return false;
    }
    return true;
}

std::vector<double> min_widths_of(std::span<const VariableSpec> specs, double fraction) {
    std::vector<double> out;
    out.reserve(specs.size());
    for (const auto& s : specs) out.push_back(fraction * s.width());
    return out;
}

std::vector<Box> UniformSplit::child_boxes(const Box& parent) const {
    const std::size_t n = std::size_t{1} << dims.size();
    std::vector<Box> out(n, parent);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < dims.size(); ++i) {
            auto& iv = out[c][static_cast<std::size_t>(dims[i])];
            if (c & (std::size_t{1} << i)) {
                iv.lo = mids[i];
            } else {
                iv.hi = mids[i];
            }
        }
    }
    return out;
}

}  // namespace pearl
