#include "pearl/learner/qtable.hpp"

#include <algorithm>
#include <limits>

#include <nlohmann/json.hpp>

#include "pearl/core/error.hpp"

namespace pearl {

double QTable::max_at(const SpaCat& tree, int leaf) const {
    double best = -std::numeric_limits<double>::infinity();
    for_each_abstract_action(tree, leaf, [&](AbstractAction a) { best = std::max(best, get(leaf, a)); });
    return best == -std::numeric_limits<double>::infinity() ? 0.0 : best;
}

std::vector<std::pair<QKey, double>> QTable::rows_at(int leaf) const {
    std::vector<std::pair<QKey, double>> out;
    for (const auto& [k, v] : rows_) {
        if (k.leaf == leaf) out.emplace_back(k, v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t count_abstract_actions(const SpaCat& tree, int leaf) {
    std::size_t n = 0;
    for (const auto& apt : tree.node(leaf).apts) n += apt.leaves().size();
    return n;
}

nlohmann::json qtable_to_json(const QTable& q, const std::vector<ActionSchema>& actions) {
    std::vector<std::pair<QKey, double>> rows(q.rows().begin(), q.rows().end());
    std::sort(rows.begin(), rows.end());
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& [k, v] : rows) {
        jr.push_back({k.leaf, actions.at(static_cast<std::size_t>(k.action)).label, k.apt_leaf, v});
    }
    return {{"format", "pearl-qtable"}, {"version", 1}, {"rows", std::move(jr)}};
}

QTable qtable_from_json(const nlohmann::json& doc, const std::vector<ActionSchema>& actions) {
    try {
        if (doc.value("format", std::string{}) != "pearl-qtable" || doc.at("version").get<int>() != 1) {
            throw MalformedInput("not a version-1 pearl-qtable document");
        }
        QTable q;
        for (const auto& row : doc.at("rows")) {
            const std::string label = row.at(1).get<std::string>();
            auto it = std::find_if(actions.begin(), actions.end(),
                                   [&](const ActionSchema& a) { return a.label == label; });
            if (it == actions.end()) throw MalformedInput("unknown action label '" + label + "'");
            q.set(QKey{row.at(0).get<int>(), static_cast<int>(it - actions.begin()), row.at(2).get<int>()},
                  row.at(3).get<double>());
        }
        return q;
    } catch (const MalformedInput&) {
        throw;
    } catch (const std::exception& e) {
        throw MalformedInput(std::string("bad Q-table document: ") + e.what());
    }
}

}  // namespace pearl
