#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "pearl/abstraction/spacat.hpp"

namespace pearl {

inline constexpr int kTreeFormatVersion = 1;

nlohmann::json tree_to_json(const SpaCat& tree);
/// Throws MalformedTree on parse errors, version mismatch, or broken invariants.
SpaCat tree_from_json(const nlohmann::json& doc);

std::string tree_serialize(const SpaCat& tree);
SpaCat tree_deserialize(const std::string& text);

nlohmann::json variable_to_json(const VariableSpec& v);
VariableSpec variable_from_json(const nlohmann::json& j);

}  // namespace pearl
