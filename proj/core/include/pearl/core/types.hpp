#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pearl {

enum class VarKind { continuous, discrete };

/// A bounded variable with half-open domain [lo, hi). Discrete variables take
/// the integer codes lo, lo+1, ..., hi-1.
struct VariableSpec {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    VarKind kind = VarKind::continuous;

    [[nodiscard]] bool contains(double v) const;
    [[nodiscard]] double width() const { return hi - lo; }
    /// Number of integer codes (discrete only).
    [[nodiscard]] long codes() const;
    /// Throws InvalidArgument if the spec is ill-formed.
    void validate() const;
};

VariableSpec continuous_var(std::string name, double lo, double hi);
VariableSpec discrete_var(std::string name, long lo, long hi);

/// Assignment of a value to every state variable, in state-space order.
using FactoredState = std::vector<double>;

struct ActionSchema {
    std::string label;
    std::vector<VariableSpec> params;
};

/// An action label (as an index into the environment's schema list) with all
/// parameters bound.
struct GroundedAction {
    std::size_t action = 0;
    std::vector<double> args;
};

struct StepResult {
    FactoredState next_state;
    double reward = 0.0;
    bool done = false;
    bool goal_reached = false;
    /// The episode ended only because the horizon was exhausted.
    bool truncated = false;
};

/// True when every value lies inside its variable's domain.
bool in_bounds(std::span<const VariableSpec> space, std::span<const double> values);

/// Clamps a value into [lo, hi) (and onto an integer code for discrete vars).
double clamp_to(const VariableSpec& spec, double v);

}  // namespace pearl
