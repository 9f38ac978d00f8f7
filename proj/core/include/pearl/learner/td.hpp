#pragma once

#include <string>
#include <vector>

#include "pearl/abstraction/spacat.hpp"
#include "pearl/core/types.hpp"
#include "pearl/learner/qtable.hpp"

namespace pearl {

/// One collapsed segment of concrete steps that shared a (leaf, action) pair.
struct AbstractTransition {
    int leaf = 0;
    AbstractAction action;
    /// sum_j gamma^j r_j over the segment.
    double reward = 0.0;
    int next_leaf = 0;
    /// The segment ended in a terminal state (goal or terminal event); horizon
    /// truncation alone does not count.
    bool done = false;
    int step_count = 0;
};

struct ConcreteTransition {
    FactoredState state;
    AbstractAction action;
    double reward = 0.0;
    FactoredState next_state;
    bool done = false;
};

struct TraceBuffers {
    std::vector<AbstractTransition> abstract_buf;
    std::vector<ConcreteTransition> concrete_buf;

    void clear() {
        abstract_buf.clear();
        concrete_buf.clear();
    }
};

/// Replacing eligibility traces keyed like the Q-table.
class EligibilityTraces {
public:
    static constexpr double kCutoff = 1e-4;

    void clear() { entries_.clear(); }
    void replace(const QKey& k);
    [[nodiscard]] double get(const QKey& k) const;
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] const std::vector<std::pair<QKey, double>>& entries() const { return entries_; }

    /// Q[k] += step * e_k for every trace, then e_k *= decay; traces below
    /// kCutoff are dropped.
    void apply(QTable& q, double step, double decay);

private:
    std::vector<std::pair<QKey, double>> entries_;
};

/// Discount applied to the bootstrap of a collapsed segment: gamma once, or
/// gamma^step_count.
enum class SegmentDiscount { once, per_step };

SegmentDiscount parse_segment_discount(const std::string& s);
const char* to_string(SegmentDiscount d);

/// (r + g * max Q(s', .)) - Q(s, a) with g per `discount`; the bootstrap is 0
/// when done.
double td_error(const QTable& q, const SpaCat& tree, const AbstractTransition& t, double gamma,
                SegmentDiscount discount = SegmentDiscount::once);

/// Concrete-state value estimate
///     r + gamma * max Q(leaf(s'), .) - Q(leaf(s), a_executed).
double value_estimate(const QTable& q, const ConcreteTransition& t, const SpaCat& tree, double gamma);

/// Same estimate with the subtracted term taken at `action` instead of the
/// executed abstract action.
double value_estimate_at(const QTable& q, const ConcreteTransition& t, const SpaCat& tree,
                         double gamma, AbstractAction action);

/// Tabular TD(lambda) step with replacing traces. Returns the TD error.
double td_lambda_update(QTable& q, EligibilityTraces& traces, const SpaCat& tree,
                        const AbstractTransition& t, double alpha, double gamma, double lambda,
                        SegmentDiscount discount = SegmentDiscount::once);

}  // namespace pearl
