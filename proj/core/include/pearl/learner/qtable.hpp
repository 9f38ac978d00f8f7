#pragma once

#include <cstddef>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pearl/abstraction/spacat.hpp"

namespace pearl {

/// Abstract action: an action label (schema index) paired with one leaf of
/// that action's APT at the current state leaf.
struct AbstractAction {
    int action = 0;
    int apt_leaf = 0;

    friend bool operator==(const AbstractAction&, const AbstractAction&) = default;
    friend auto operator<=>(const AbstractAction&, const AbstractAction&) = default;
};

struct QKey {
    int leaf = 0;
    int action = 0;
    int apt_leaf = 0;

    QKey() = default;
    QKey(int l, int a, int apt) : leaf(l), action(a), apt_leaf(apt) {}
    QKey(int l, AbstractAction a) : leaf(l), action(a.action), apt_leaf(a.apt_leaf) {}

    [[nodiscard]] AbstractAction abstract_action() const { return {action, apt_leaf}; }

    friend bool operator==(const QKey&, const QKey&) = default;
    friend auto operator<=>(const QKey&, const QKey&) = default;
};

struct QKeyHash {
    std::size_t operator()(const QKey& k) const noexcept {
        std::size_t h = static_cast<std::size_t>(static_cast<unsigned>(k.leaf)) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::size_t>(static_cast<unsigned>(k.action)) + 0x7F4A7C15ULL + (h << 6) + (h >> 2);
        h ^= static_cast<std::size_t>(static_cast<unsigned>(k.apt_leaf)) + 0x85EBCA6BULL + (h << 6) + (h >> 2);
        return h;
    }
};

/// Sparse Q-function over (state leaf, action, APT leaf). Absent keys read
/// as 0 and reads never insert.
class QTable {
public:
    using Map = std::unordered_map<QKey, double, QKeyHash>;

    [[nodiscard]] double get(const QKey& k) const {
        auto it = rows_.find(k);
        return it == rows_.end() ? 0.0 : it->second;
    }
    [[nodiscard]] double get(int leaf, AbstractAction a) const { return get(QKey{leaf, a}); }
    void set(const QKey& k, double v) { rows_[k] = v; }
    void add(const QKey& k, double dv) { rows_[k] += dv; }
    void erase(const QKey& k) { rows_.erase(k); }
    [[nodiscard]] bool contains(const QKey& k) const { return rows_.count(k) != 0; }
    [[nodiscard]] std::size_t size() const { return rows_.size(); }
    [[nodiscard]] const Map& rows() const { return rows_; }

    /// max over every (action, APT leaf) currently attached to `leaf`.
    [[nodiscard]] double max_at(const SpaCat& tree, int leaf) const;

    /// Rows stored for `leaf`, sorted by key.
    [[nodiscard]] std::vector<std::pair<QKey, double>> rows_at(int leaf) const;

    friend bool operator==(const QTable&, const QTable&) = default;

private:
    Map rows_;
};

/// Calls f(AbstractAction) for every abstract action available at `leaf`,
/// in (action, APT leaf id) order.
template <typename F>
void for_each_abstract_action(const SpaCat& tree, int leaf, F&& f) {
    const auto& node = tree.node(leaf);
    for (std::size_t a = 0; a < node.apts.size(); ++a) {
        for (int apt_leaf : node.apts[a].leaves()) f(AbstractAction{static_cast<int>(a), apt_leaf});
    }
}

std::size_t count_abstract_actions(const SpaCat& tree, int leaf);

/// Checkpoint format: {"format": "pearl-qtable", "version": 1, "rows":
/// [[leaf, action_label, apt_leaf, value], ...]} with rows sorted by key.
nlohmann::json qtable_to_json(const QTable& q, const std::vector<ActionSchema>& actions);
QTable qtable_from_json(const nlohmann::json& doc, const std::vector<ActionSchema>& actions);

}  // namespace pearl
