#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "sfols/baselines.hpp"

namespace sfols {

// Malformed configuration: unknown keys, bad values, unreadable files.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    nlohmann::json environment;
    std::string algorithm = "sfols";
    SolverConfig solver;
    double epsilon = 0.0;
    int max_iterations = 1000;
    int wcpi_max_iters = 50;
    double sip_delta = 0.1;
    int random_iters = 10;
    MetricConfig metrics;
    int eval_num_weights = 64;
    int lifelong_phases = 5;
    long lifelong_steps = 10000;
    bool save_sf_tables = true;
    std::uint64_t seed = 0;
    std::string output = "out";
};

// Strict parse: every unknown key anywhere in the document is a ConfigError.
RunConfig parse_run_config(const nlohmann::json& j);

// Builds the configured environment; the "random" family derives its seed
// from the global one through a dedicated stream.
TabularMOMDP build_env(const nlohmann::json& env, std::uint64_t global_seed);

struct CliOverrides {
    std::string out;                   // empty: keep the config value
    std::optional<std::uint64_t> seed; // overrides the config seed
};

// Exit codes: 0 success, 2 configuration error, 3 runtime failure.
int cmd_run(const std::string& config_path, const CliOverrides& ov);
int cmd_eval(const std::string& config_path, const std::string& ccs_path,
             const CliOverrides& ov);
int cmd_lifelong(const std::string& config_path, const std::string& ccs_path,
                 int phases, long steps_per_phase, const CliOverrides& ov);

} // namespace sfols
