#include "pearl/abstraction/apt.hpp"

#include <algorithm>
#include <cmath>

#include "pearl/core/error.hpp"

namespace pearl {

Apt::Apt(std::span<const VariableSpec> params) : min_widths_(min_widths_of(params)) {
    nodes_.push_back(AptNode{box_of(params), -1, {}, {}});
    leaves_ = {0};
}

bool Apt::is_leaf(int id) const {
    return id >= 0 && static_cast<std::size_t>(id) < nodes_.size() &&
           nodes_[static_cast<std::size_t>(id)].is_leaf();
}

int Apt::leaf_of(std::span<const double> q) const {
    int id = 0;
    while (!nodes_[static_cast<std::size_t>(id)].is_leaf()) {
        const auto& n = nodes_[static_cast<std::size_t>(id)];
        id = n.children[n.split.child_index(q)];
    }
    return id;
}

bool Apt::can_split(int leaf) const {
    if (!is_leaf(leaf)) return false;
    const auto& box = nodes_[static_cast<std::size_t>(leaf)].box;
    for (std::size_t d = 0; d < box.size(); ++d) {
        if (box[d].splittable(min_widths_[d])) return true;
    }
    return false;
}

std::vector<int> Apt::refine_uniform(int leaf) {
    if (!is_leaf(leaf)) throw InvalidArgument("APT node " + std::to_string(leaf) + " is not a leaf");
    UniformSplit split;
    const Box parent_box = nodes_[static_cast<std::size_t>(leaf)].box;
    for (std::size_t d = 0; d < parent_box.size(); ++d) {
        if (parent_box[d].splittable(min_widths_[d])) {
            split.dims.push_back(static_cast<int>(d));
            split.mids.push_back(parent_box[d].split_point());
        }
    }
    if (split.dims.empty()) {
        throw UnsplittableLeaf("APT leaf " + std::to_string(leaf) + " has no splittable dimension");
    }
    std::vector<int> children;
    for (auto& box : split.child_boxes(parent_box)) {
        children.push_back(static_cast<int>(nodes_.size()));
        nodes_.push_back(AptNode{std::move(box), leaf, {}, {}});
    }
    auto& parent = nodes_[static_cast<std::size_t>(leaf)];
    parent.children = children;
    parent.split = std::move(split);
    rebuild_leaves();
    return children;
}

std::vector<double> sample_box(const Box& box, Rng& rng) {
    std::vector<double> q;
    q.reserve(box.size());
    for (const auto& iv : box) {
        if (iv.kind == VarKind::discrete) {
            const auto k = static_cast<std::uint64_t>(std::llround(iv.hi - iv.lo));
            q.push_back(iv.lo + static_cast<double>(rng.below(k)));
        } else {
            q.push_back(rng.uniform(iv.lo, iv.hi));
        }
    }
    return q;
}

std::vector<double> Apt::sample(int leaf, Rng& rng) const {
    return sample_box(node(leaf).box, rng);
}

void Apt::rebuild_leaves() {
    leaves_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].is_leaf()) leaves_.push_back(static_cast<int>(i));
    }
}

Apt Apt::from_parts(std::vector<AptNode> nodes, std::vector<double> min_widths) {
    if (nodes.empty()) throw MalformedTree("APT has no nodes");
    if (nodes[0].parent != -1) throw MalformedTree("APT root has a parent");
    const std::size_t dims = min_widths.size();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        if (n.box.size() != dims) throw MalformedTree("APT node box has wrong dimension");
        if (i > 0 && (n.parent < 0 || static_cast<std::size_t>(n.parent) >= i)) {
            throw MalformedTree("APT node parent must precede the child");
        }
        if (!n.children.empty()) {
            if (n.children.size() != (std::size_t{1} << n.split.dims.size()) ||
                n.split.dims.size() != n.split.mids.size()) {
                throw MalformedTree("APT split does not match child count");
            }
            auto boxes = n.split.child_boxes(n.box);
            for (std::size_t c = 0; c < n.children.size(); ++c) {
                int id = n.children[c];
                if (id <= static_cast<int>(i) || static_cast<std::size_t>(id) >= nodes.size() ||
                    nodes[static_cast<std::size_t>(id)].parent != static_cast<int>(i) ||
                    !(nodes[static_cast<std::size_t>(id)].box == boxes[c])) {
                    throw MalformedTree("APT child does not partition its parent");
                }
            }
        }
    }
    Apt apt;
    apt.nodes_ = std::move(nodes);
    apt.min_widths_ = std::move(min_widths);
    apt.rebuild_leaves();
    return apt;
}

bool operator==(const Apt& a, const Apt& b) {
    if (a.nodes_.size() != b.nodes_.size() || a.min_widths_ != b.min_widths_) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
        const auto& x = a.nodes_[i];
        const auto& y = b.nodes_[i];
        if (!(x.box == y.box) || x.parent != y.parent || x.children != y.children ||
            x.split.dims != y.split.dims || x.split.mids != y.split.mids) {
            return false;
        }
    }
    return true;
}

}  // namespace pearl
