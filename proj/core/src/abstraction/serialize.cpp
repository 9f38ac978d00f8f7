#include "pearl/abstraction/serialize.hpp"

#include <nlohmann/json.hpp>

#include "pearl/core/error.hpp"

namespace pearl {

using nlohmann::json;

namespace {

const char* kind_name(VarKind k) { return k == VarKind::discrete ? "discrete" : "continuous"; }

VarKind kind_from(const std::string& s) {
    if (s == "continuous") return VarKind::continuous;
    if (s == "discrete") return VarKind::discrete;
    throw MalformedTree("unknown variable kind '" + s + "'");
}

json box_to_json(const Box& box) {
    json j = json::array();
    for (const auto& iv : box) j.push_back({iv.lo, iv.hi, kind_name(iv.kind)});
    return j;
}

Box box_from_json(const json& j) {
    Box box;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3) throw MalformedTree("interval must be [lo, hi, kind]");
        box.push_back({e[0].get<double>(), e[1].get<double>(), kind_from(e[2].get<std::string>())});
    }
    return box;
}

json split_to_json(const UniformSplit& s) { return {{"dims", s.dims}, {"mids", s.mids}}; }

UniformSplit split_from_json(const json& j) {
    return {j.at("dims").get<std::vector<int>>(), j.at("mids").get<std::vector<double>>()};
}

json apt_to_json(const Apt& apt) {
    json nodes = json::array();
    for (const auto& n : apt.nodes()) {
        json jn = {{"box", box_to_json(n.box)}, {"parent", n.parent}, {"children", n.children}};
        if (!n.is_leaf()) jn["split"] = split_to_json(n.split);
        nodes.push_back(std::move(jn));
    }
    return {{"min_widths", apt.min_widths()}, {"nodes", std::move(nodes)}};
}

Apt apt_from_json(const json& j) {
    std::vector<AptNode> nodes;
    for (const auto& jn : j.at("nodes")) {
        AptNode n;
        n.box = box_from_json(jn.at("box"));
        n.parent = jn.at("parent").get<int>();
        n.children = jn.at("children").get<std::vector<int>>();
        if (!n.children.empty()) n.split = split_from_json(jn.at("split"));
        nodes.push_back(std::move(n));
    }
    return Apt::from_parts(std::move(nodes), j.at("min_widths").get<std::vector<double>>());
}

SplitKind split_kind_from(const std::string& s) {
    if (s == "none") return SplitKind::none;
    if (s == "uniform") return SplitKind::uniform;
    if (s == "flexible") return SplitKind::flexible;
    throw MalformedTree("unknown split kind '" + s + "'");
}

}  // namespace

json variable_to_json(const VariableSpec& v) {
    return {{"name", v.name}, {"lo", v.lo}, {"hi", v.hi}, {"kind", kind_name(v.kind)}};
}

VariableSpec variable_from_json(const json& j) {
    VariableSpec v{j.at("name").get<std::string>(), j.at("lo").get<double>(),
                   j.at("hi").get<double>(), kind_from(j.at("kind").get<std::string>())};
    return v;
}

json tree_to_json(const SpaCat& tree) {
    json doc;
    doc["format"] = "pearl-spacat";
    doc["version"] = kTreeFormatVersion;
    json vars = json::array();
    for (const auto& v : tree.state_space()) vars.push_back(variable_to_json(v));
    doc["state_space"] = std::move(vars);
    json actions = json::array();
    for (const auto& a : tree.actions()) {
        json params = json::array();
        for (const auto& p : a.params) params.push_back(variable_to_json(p));
        actions.push_back({{"label", a.label}, {"params", std::move(params)}});
    }
    doc["actions"] = std::move(actions);
    json nodes = json::array();
    for (std::size_t i = 0; i < tree.num_nodes(); ++i) {
        const auto& n = tree.node(static_cast<int>(i));
        json jn;
        jn["id"] = i;
        jn["parent"] = n.parent;
        jn["depth"] = n.depth;
        jn["bounds"] = box_to_json(n.bounds);
        jn["split"] = to_string(n.split);
        jn["children"] = n.children;
        jn["cell_label"] = n.cell_label;
        if (n.split == SplitKind::uniform) jn["uniform"] = split_to_json(n.uniform);
        if (n.split == SplitKind::flexible) jn["classifier"] = *n.classifier;
        if (n.is_leaf()) {
            json apts = json::array();
            for (const auto& apt : n.apts) apts.push_back(apt_to_json(apt));
            jn["apts"] = std::move(apts);
        }
        nodes.push_back(std::move(jn));
    }
    doc["nodes"] = std::move(nodes);
    return doc;
}

SpaCat tree_from_json(const json& doc) {
    try {
        if (doc.value("format", std::string{}) != "pearl-spacat") {
            throw MalformedTree("not a pearl-spacat document");
        }
        if (doc.at("version").get<int>() != kTreeFormatVersion) {
            throw MalformedTree("unsupported tree format version");
        }
        std::vector<VariableSpec> vars;
        for (const auto& jv : doc.at("state_space")) vars.push_back(variable_from_json(jv));
        std::vector<ActionSchema> actions;
        for (const auto& ja : doc.at("actions")) {
            ActionSchema a;
            a.label = ja.at("label").get<std::string>();
            for (const auto& jp : ja.at("params")) a.params.push_back(variable_from_json(jp));
            actions.push_back(std::move(a));
        }
        std::vector<SpaCatNode> nodes;
        std::size_t expected_id = 0;
        for (const auto& jn : doc.at("nodes")) {
            if (jn.at("id").get<std::size_t>() != expected_id++) throw MalformedTree("node ids out of order");
            SpaCatNode n;
            n.parent = jn.at("parent").get<int>();
            n.depth = jn.at("depth").get<int>();
            n.bounds = box_from_json(jn.at("bounds"));
            n.split = split_kind_from(jn.at("split").get<std::string>());
            n.children = jn.at("children").get<std::vector<int>>();
            n.cell_label = jn.at("cell_label").get<int>();
            if (n.split == SplitKind::uniform) n.uniform = split_from_json(jn.at("uniform"));
            if (n.split == SplitKind::flexible) {
                n.classifier = std::make_shared<const statlearn::ClassifierModel>(
                    jn.at("classifier").get<statlearn::ClassifierModel>());
            }
            if (jn.contains("apts")) {
                for (const auto& ja : jn.at("apts")) n.apts.push_back(apt_from_json(ja));
            }
            nodes.push_back(std::move(n));
        }
        return SpaCat::from_parts(std::move(vars), std::move(actions), std::move(nodes));
    } catch (const MalformedTree&) {
        throw;
    } catch (const std::exception& e) {
        throw MalformedTree(e.what());
    }
}

std::string tree_serialize(const SpaCat& tree) { return tree_to_json(tree).dump(1); }

SpaCat tree_deserialize(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw MalformedTree(std::string("unparseable tree document: ") + e.what());
    }
    return tree_from_json(doc);
}

}  // namespace pearl
