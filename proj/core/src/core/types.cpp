#include "pearl/core/types.hpp"

#include <algorithm>
#include <cmath>

#include "pearl/core/error.hpp"

namespace pearl {

bool VariableSpec::contains(double v) const {
    if (!(v >= lo && v < hi)) return false;
    if (kind == VarKind::discrete) return v == std::floor(v);
    return true;
}

long VariableSpec::codes() const {
    return static_cast<long>(std::llround(hi - lo));
}

void VariableSpec::validate() const {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw InvalidArgument("variable '" + name + "' needs finite lo < hi");
    }
    if (kind == VarKind::discrete && (lo != std::floor(lo) || hi != std::floor(hi))) {
        throw InvalidArgument("discrete variable '" + name + "' needs integer bounds");
    }
}

VariableSpec continuous_var(std::string name, double lo, double hi) {
    VariableSpec v{std::move(name), lo, hi, VarKind::continuous};
    v.validate();
    return v;
}

VariableSpec discrete_var(std::string name, long lo, long hi) {
    VariableSpec v{std::move(name), static_cast<double>(lo), static_cast<double>(hi),
                   VarKind::discrete};
    v.validate();
    return v;
}

bool in_bounds(std::span<const VariableSpec> space, std::span<const double> values) {
    if (space.size() != values.size()) return false;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (!space[i].contains(values[i])) return false;
    }
    return true;
}

double clamp_to(const VariableSpec& spec, double v) {
    if (spec.kind == VarKind::discrete) {
        double c = std::floor(v);
        return std::clamp(c, spec.lo, spec.hi - 1.0);
    }
    if (std::isnan(v)) return spec.lo;
    if (v < spec.lo) return spec.lo;
    if (v >= spec.hi) return std::nextafter(spec.hi, spec.lo);
    return v;
}

}  // namespace pearl
