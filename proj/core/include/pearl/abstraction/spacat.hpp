#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pearl/abstraction/apt.hpp"
#include "pearl/abstraction/box.hpp"
#include "pearl/core/types.hpp"
#include "pearl/statlearn/svm.hpp"

namespace pearl {

enum class SplitKind { none, uniform, flexible };

const char* to_string(SplitKind k);

struct SpaCatNode {
    /// Axis-aligned bounding box of the node's region. For classifier cells
    /// this is the parent's box; the region itself is the subset of the
    /// parent that the parent's classifier maps to `cell_label`.
    Box bounds;
    int parent = -1;
    int depth = 0;
    std::vector<int> children;
    SplitKind split = SplitKind::none;
    UniformSplit uniform;
    std::shared_ptr<const statlearn::ClassifierModel> classifier;
    /// Class index this node represents in its parent's classifier, or -1.
    int cell_label = -1;
    /// One APT per action schema; populated on leaves only.
    std::vector<Apt> apts;

    [[nodiscard]] bool is_leaf() const { return children.empty(); }
};

/// Hierarchical partition of the state space whose leaves each carry one
/// action parameter tree per action. Node ids are stable indices; leaves are
/// never removed, only turned into internal nodes by refinement.
class SpaCat {
public:
    SpaCat(std::vector<VariableSpec> state_space, std::vector<ActionSchema> actions);

    [[nodiscard]] int leaf_of(std::span<const double> s) const;
    [[nodiscard]] const std::vector<int>& leaves() const { return leaves_; }
    [[nodiscard]] const SpaCatNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    [[nodiscard]] std::size_t num_nodes() const { return nodes_.size(); }
    [[nodiscard]] std::size_t num_leaves() const { return leaves_.size(); }
    [[nodiscard]] bool is_leaf(int id) const;
    /// Sum of APT leaf counts over every state leaf and action.
    [[nodiscard]] std::size_t total_apt_leaves() const;

    [[nodiscard]] const std::vector<VariableSpec>& state_space() const { return state_space_; }
    [[nodiscard]] const std::vector<ActionSchema>& actions() const { return actions_; }
    [[nodiscard]] const std::vector<double>& min_widths() const { return min_widths_; }

    [[nodiscard]] const Apt& apt(int leaf, std::size_t action) const;
    Apt& apt(int leaf, std::size_t action);

    /// Dimensions uniform refinement of `leaf` would bisect: the `count`
    /// splittable variables with the largest width relative to their domain,
    /// ties by lower index, returned in ascending index order.
    [[nodiscard]] std::vector<int> split_variables(int leaf, int count) const;

    /// Bisects up to `variables_to_split` variables of `leaf`. Children copy
    /// the leaf's APTs. Returns child ids. Throws UnsplittableLeaf.
    std::vector<int> refine_uniform(int leaf, int variables_to_split);

    /// Splits `leaf` into k classifier cells routed by `model`. Throws
    /// DegenerateModel when the model predicts one class on `training_states`,
    /// InvalidArgument when k < 2 or k differs from the model's class count.
    std::vector<int> refine_flexible(int leaf, std::shared_ptr<const statlearn::ClassifierModel> model,
                                     int k, const std::vector<std::vector<double>>& training_states);

    /// Reassembles a tree from deserialized nodes; validates every structural
    /// invariant and throws MalformedTree on violation.
    static SpaCat from_parts(std::vector<VariableSpec> state_space, std::vector<ActionSchema> actions,
                             std::vector<SpaCatNode> nodes);

    [[nodiscard]] const std::vector<SpaCatNode>& nodes() const { return nodes_; }

private:
    SpaCat() = default;
    void rebuild_leaves();
    std::vector<Apt> fresh_apts() const;

    std::vector<VariableSpec> state_space_;
    std::vector<ActionSchema> actions_;
    std::vector<double> min_widths_;
    std::vector<SpaCatNode> nodes_;
    std::vector<int> leaves_;
};

}  // namespace pearl
