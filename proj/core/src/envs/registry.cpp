#include "pearl/envs/registry.hpp"

#include <cstdlib>

#include "pearl/core/error.hpp"
#include "pearl/envs/corridor.hpp"
#include "pearl/envs/multicity.hpp"
#include "pearl/envs/office.hpp"
#include "pearl/envs/pinball.hpp"
#include "pearl/envs/soccer.hpp"

#ifndef PEARL_DEFAULT_DATA_DIR
#define PEARL_DEFAULT_DATA_DIR "data"
#endif

namespace pearl {

const std::vector<std::string>& env_names() {
    static const std::vector<std::string> names{"office", "pinball", "multicity", "soccer", "corridor"};
    return names;
}

std::string data_dir() {
    if (const char* env = std::getenv("PEARL_DATA_DIR"); env && *env) return env;
    return PEARL_DEFAULT_DATA_DIR;
}

std::string default_layout_path(const std::string& env_name) {
    return data_dir() + "/layouts/" + env_name + ".json";
}

std::unique_ptr<Env> make_env(const std::string& name, const std::string& layout_path) {
    if (name == "corridor") return std::make_unique<CorridorEnv>();
    const std::string path = layout_path.empty() ? default_layout_path(name) : layout_path;
    if (name == "office") return std::make_unique<OfficeEnv>(load_layout(path));
    if (name == "multicity") return std::make_unique<MultiCityEnv>(load_layout(path));
    if (name == "pinball") return std::make_unique<PinballEnv>(load_layout(path));
    if (name == "soccer") return std::make_unique<SoccerEnv>(load_layout(path));
    throw ConfigError("unknown environment '" + name + "'");
}

}  // namespace pearl
