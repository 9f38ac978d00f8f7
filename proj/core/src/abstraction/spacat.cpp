#include "pearl/abstraction/spacat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "pearl/core/error.hpp"

namespace pearl {

const char* to_string(SplitKind k) {
    switch (k) {
        case SplitKind::none: return "none";
        case SplitKind::uniform: return "uniform";
        case SplitKind::flexible: return "flexible";
    }
    return "?";
}

SpaCat::SpaCat(std::vector<VariableSpec> state_space, std::vector<ActionSchema> actions)
    : state_space_(std::move(state_space)), actions_(std::move(actions)) {
    if (state_space_.empty()) throw InvalidArgument("state space must have at least one variable");
    if (actions_.empty()) throw InvalidArgument("action list must not be empty");
    for (const auto& v : state_space_) v.validate();
    min_widths_ = min_widths_of(state_space_);
    SpaCatNode root;
    root.bounds = box_of(state_space_);
    root.apts = fresh_apts();
    nodes_.push_back(std::move(root));
    leaves_ = {0};
}

std::vector<Apt> SpaCat::fresh_apts() const {
    std::vector<Apt> apts;
    apts.reserve(actions_.size());
    for (const auto& a : actions_) apts.emplace_back(a.params);
    return apts;
}

bool SpaCat::is_leaf(int id) const {
    return id >= 0 && static_cast<std::size_t>(id) < nodes_.size() &&
           nodes_[static_cast<std::size_t>(id)].is_leaf();
}

int SpaCat::leaf_of(std::span<const double> s) const {
    int id = 0;
    for (;;) {
        const auto& n = nodes_[static_cast<std::size_t>(id)];
        switch (n.split) {
            case SplitKind::none:
                return id;
            case SplitKind::uniform:
                id = n.children[n.uniform.child_index(s)];
                break;
            case SplitKind::flexible:
                id = n.children[n.classifier->predict_index(s)];
                break;
        }
    }
}

std::size_t SpaCat::total_apt_leaves() const {
    std::size_t total = 0;
    for (int leaf : leaves_) {
        for (const auto& apt : nodes_[static_cast<std::size_t>(leaf)].apts) total += apt.leaves().size();
    }
    return total;
}

const Apt& SpaCat::apt(int leaf, std::size_t action) const {
    if (!is_leaf(leaf)) throw InvalidArgument("node " + std::to_string(leaf) + " is not a leaf");
    return nodes_[static_cast<std::size_t>(leaf)].apts.at(action);
}

Apt& SpaCat::apt(int leaf, std::size_t action) {
    if (!is_leaf(leaf)) throw InvalidArgument("node " + std::to_string(leaf) + " is not a leaf");
    return nodes_[static_cast<std::size_t>(leaf)].apts.at(action);
}

std::vector<int> SpaCat::split_variables(int leaf, int count) const {
    if (!is_leaf(leaf)) throw InvalidArgument("node " + std::to_string(leaf) + " is not a leaf");
    const auto& box = nodes_[static_cast<std::size_t>(leaf)].bounds;
    std::vector<std::pair<double, int>> ranked;
    for (std::size_t d = 0; d < box.size(); ++d) {
        if (!box[d].splittable(min_widths_[d])) continue;
        ranked.emplace_back(box[d].width() / state_space_[d].width(), static_cast<int>(d));
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<int> dims;
    for (std::size_t i = 0; i < ranked.size() && static_cast<int>(i) < count; ++i) {
        dims.push_back(ranked[i].second);
    }
    std::sort(dims.begin(), dims.end());
    return dims;
}

std::vector<int> SpaCat::refine_uniform(int leaf, int variables_to_split) {
    if (!is_leaf(leaf)) throw InvalidArgument("node " + std::to_string(leaf) + " is not a leaf");
    if (variables_to_split < 1) throw InvalidArgument("variables_to_split must be >= 1");
    auto dims = split_variables(leaf, variables_to_split);
    if (dims.empty()) {
        throw UnsplittableLeaf("state leaf " + std::to_string(leaf) + " has no splittable variable");
    }
    UniformSplit split;
    const Box parent_box = nodes_[static_cast<std::size_t>(leaf)].bounds;
    for (int d : dims) {
        split.dims.push_back(d);
        split.mids.push_back(parent_box[static_cast<std::size_t>(d)].split_point());
    }
    const std::vector<Apt> apts = nodes_[static_cast<std::size_t>(leaf)].apts;
    const int depth = nodes_[static_cast<std::size_t>(leaf)].depth + 1;
    std::vector<int> children;
    for (auto& box : split.child_boxes(parent_box)) {
        SpaCatNode child;
        child.bounds = std::move(box);
        child.parent = leaf;
        child.depth = depth;
        child.apts = apts;
        children.push_back(static_cast<int>(nodes_.size()));
        nodes_.push_back(std::move(child));
    }
    auto& parent = nodes_[static_cast<std::size_t>(leaf)];
    parent.children = children;
    parent.split = SplitKind::uniform;
    parent.uniform = std::move(split);
    parent.apts.clear();
    rebuild_leaves();
    return children;
}

std::vector<int> SpaCat::refine_flexible(int leaf,
                                         std::shared_ptr<const statlearn::ClassifierModel> model,
                                         int k,
                                         const std::vector<std::vector<double>>& training_states) {
    if (!is_leaf(leaf)) throw InvalidArgument("node " + std::to_string(leaf) + " is not a leaf");
    if (k < 2) throw InvalidArgument("flexible refinement needs k >= 2 classes");
    if (!model || model->classes.size() != static_cast<std::size_t>(k)) {
        throw InvalidArgument("classifier class count does not match k");
    }
    if (model->dim != state_space_.size()) {
        throw DimensionMismatch("classifier dimension differs from the state space");
    }
    std::set<std::size_t> predicted;
    for (const auto& s : training_states) predicted.insert(model->predict_index(s));
    if (predicted.size() < 2) {
        throw DegenerateModel("classifier predicts a single class on its training states");
    }

    const std::vector<Apt> apts = nodes_[static_cast<std::size_t>(leaf)].apts;
    const Box bounds = nodes_[static_cast<std::size_t>(leaf)].bounds;
    const int depth = nodes_[static_cast<std::size_t>(leaf)].depth + 1;
    std::vector<int> children;
    for (int c = 0; c < k; ++c) {
        SpaCatNode child;
        child.bounds = bounds;
        child.parent = leaf;
        child.depth = depth;
        child.cell_label = c;
        child.apts = apts;
        children.push_back(static_cast<int>(nodes_.size()));
        nodes_.push_back(std::move(child));
    }
    auto& parent = nodes_[static_cast<std::size_t>(leaf)];
    parent.children = children;
    parent.split = SplitKind::flexible;
    parent.classifier = std::move(model);
    parent.apts.clear();
    rebuild_leaves();
    return children;
}

void SpaCat::rebuild_leaves() {
    leaves_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].is_leaf()) leaves_.push_back(static_cast<int>(i));
    }
}

SpaCat SpaCat::from_parts(std::vector<VariableSpec> state_space, std::vector<ActionSchema> actions,
                          std::vector<SpaCatNode> nodes) {
    if (state_space.empty() || actions.empty()) throw MalformedTree("empty state space or action list");
    if (nodes.empty()) throw MalformedTree("tree has no nodes");
    if (nodes[0].parent != -1) throw MalformedTree("root has a parent");
    const Box root_box = box_of(state_space);
    if (!(nodes[0].bounds == root_box)) throw MalformedTree("root region differs from the state space");

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        if (n.bounds.size() != state_space.size()) throw MalformedTree("node box has wrong dimension");
        if (i > 0 && (n.parent < 0 || static_cast<std::size_t>(n.parent) >= i)) {
            throw MalformedTree("node parent must precede the child");
        }
        if (n.is_leaf()) {
            if (n.split != SplitKind::none) throw MalformedTree("leaf carries a split");
            if (n.apts.size() != actions.size()) throw MalformedTree("leaf lacks one APT per action");
            for (std::size_t a = 0; a < actions.size(); ++a) {
                if (n.apts[a].dims() != actions[a].params.size()) {
                    throw MalformedTree("APT dimension differs from its action schema");
                }
            }
            continue;
        }
        if (!n.apts.empty()) throw MalformedTree("internal node carries APTs");
        for (std::size_t c = 0; c < n.children.size(); ++c) {
            int id = n.children[c];
            if (id <= static_cast<int>(i) || static_cast<std::size_t>(id) >= nodes.size() ||
                nodes[static_cast<std::size_t>(id)].parent != static_cast<int>(i)) {
                throw MalformedTree("child link is inconsistent");
            }
        }
        if (n.split == SplitKind::uniform) {
            if (n.uniform.dims.empty() || n.uniform.dims.size() != n.uniform.mids.size() ||
                n.children.size() != (std::size_t{1} << n.uniform.dims.size())) {
                throw MalformedTree("uniform split does not match child count");
            }
            auto boxes = n.uniform.child_boxes(n.bounds);
            for (std::size_t c = 0; c < n.children.size(); ++c) {
                if (!(nodes[static_cast<std::size_t>(n.children[c])].bounds == boxes[c])) {
                    throw MalformedTree("uniform children do not partition the parent box");
                }
            }
        } else if (n.split == SplitKind::flexible) {
            if (!n.classifier || n.classifier->classes.size() != n.children.size() ||
                n.classifier->dim != state_space.size()) {
                throw MalformedTree("flexible split classifier does not match its children");
            }
            for (std::size_t c = 0; c < n.children.size(); ++c) {
                const auto& child = nodes[static_cast<std::size_t>(n.children[c])];
                if (child.cell_label != static_cast<int>(c) || !(child.bounds == n.bounds)) {
                    throw MalformedTree("classifier cell is inconsistent with its parent");
                }
            }
        } else {
            throw MalformedTree("internal node without a split kind");
        }
    }

    SpaCat tree;
    tree.state_space_ = std::move(state_space);
    tree.actions_ = std::move(actions);
    tree.min_widths_ = min_widths_of(tree.state_space_);
    tree.nodes_ = std::move(nodes);
    tree.rebuild_leaves();
    return tree;
}

}  // namespace pearl
