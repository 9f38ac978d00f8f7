#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pearl/core/env.hpp"

namespace pearl {

/// Names accepted by make_env.
const std::vector<std::string>& env_names();

/// Builds an environment by name. `layout_path` is required for the layout
/// driven domains; an empty path selects the shipped default layout.
std::unique_ptr<Env> make_env(const std::string& name, const std::string& layout_path = {});

/// Directory holding the shipped layouts and configs. Taken from the
/// PEARL_DATA_DIR environment variable, else the build-time default.
std::string data_dir();

std::string default_layout_path(const std::string& env_name);

}  // namespace pearl
