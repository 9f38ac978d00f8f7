#pragma once

#include <span>
#include <vector>

#include "pearl/abstraction/box.hpp"
#include "pearl/core/rng.hpp"
#include "pearl/core/types.hpp"

namespace pearl {

struct AptNode {
    Box box;
    int parent = -1;
    std::vector<int> children;
    UniformSplit split;  ///< meaningful only for internal nodes

    [[nodiscard]] bool is_leaf() const { return children.empty(); }
};

/// Action parameter tree: a hierarchical partition of one action's parameter
/// space. Node ids are indices into `nodes()`; node 0 is the root. Only
/// uniform (axis-aligned bisection) splits are supported.
class Apt {
public:
    Apt() = default;
    explicit Apt(std::span<const VariableSpec> params);

    [[nodiscard]] int leaf_of(std::span<const double> q) const;
    [[nodiscard]] const std::vector<int>& leaves() const { return leaves_; }
    [[nodiscard]] const AptNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    [[nodiscard]] const std::vector<AptNode>& nodes() const { return nodes_; }
    [[nodiscard]] std::size_t dims() const { return min_widths_.size(); }
    [[nodiscard]] const std::vector<double>& min_widths() const { return min_widths_; }
    [[nodiscard]] bool is_leaf(int id) const;

    [[nodiscard]] bool can_split(int leaf) const;

    /// Bisects every splittable dimension of `leaf`. Returns the child ids.
    /// Throws UnsplittableLeaf.
    std::vector<int> refine_uniform(int leaf);

    /// Uniform sample from the leaf's box (discrete dims: uniform code).
    [[nodiscard]] std::vector<double> sample(int leaf, Rng& rng) const;

    /// Rebuilds from serialized parts; validates structure (MalformedTree).
    static Apt from_parts(std::vector<AptNode> nodes, std::vector<double> min_widths);

    friend bool operator==(const Apt& a, const Apt& b);

private:
    void rebuild_leaves();

    std::vector<AptNode> nodes_;
    std::vector<int> leaves_;
    std::vector<double> min_widths_;
};

std::vector<double> sample_box(const Box& box, Rng& rng);

}  // namespace pearl
