#pragma once
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gaplab::experiment {

using json = nlohmann::ordered_json;

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct KindInfo {
    std::string kind;
    std::string topic;
    std::vector<std::string> required_params;
};

// Registry of runnable experiment kinds, one per operation family.
std::vector<KindInfo> list_experiments();

// Throws ConfigError on schema violations (unknown kind, missing seed or
// required parameter).
void validate_config(const json& config);

struct Result {
    std::string csv;
    json summary = json::object();  // includes config_hash and seed on every record
    double wall_seconds = 0.0;      // reporting only, never serialized
};

Result run_experiment(const json& config, int threads = 1);

// Reads the config file, runs it, writes <output>.csv and <output>.json.
// Exit status semantics: 0 ok, 2 config error, 3 numeric failure.
int run_experiment_file(const std::string& config_path,
                        std::optional<std::uint64_t> seed_override, int threads,
                        std::string* message = nullptr);

}  // namespace gaplab::experiment
