#include "sfols/runner.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>

#include "sfols/envs.hpp"
#include "sfols/eval.hpp"
#include "sfols/rng.hpp"
#include "sfols/serialize.hpp"

namespace sfols {

using nlohmann::json;

namespace {

constexpr std::uint64_t kEnvStream = 0xe4b;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
    if (!j.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "'");
    }
}

std::pair<int, int> get_cell(const json& j, const char* key,
                             std::pair<int, int> fallback) {
    if (!j.contains(key)) return fallback;
    const auto& c = j.at(key);
    if (!c.is_array() || c.size() != 2)
        throw ConfigError(std::string("'") + key + "' must be [row, col]");
    return {c[0].get<int>(), c[1].get<int>()};
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

SolverConfig parse_solver(const json& j) {
    check_keys(j, {"type", "tol", "max_sweeps", "qlearn"}, "solver");
    SolverConfig solver;
    const std::string type = get_or<std::string>(j, "type", "planner");
    if (type == "planner")
        solver.type = SolverConfig::Type::Planner;
    else if (type == "qlearning")
        solver.type = SolverConfig::Type::QLearning;
    else
        throw ConfigError("solver.type must be 'planner' or 'qlearning'");
    solver.tol = get_or<double>(j, "tol", solver.tol);
    solver.max_sweeps = get_or<int>(j, "max_sweeps", solver.max_sweeps);
    if (j.contains("qlearn")) {
        const json& q = j.at("qlearn");
        check_keys(q,
                   {"alpha", "epsilon_start", "epsilon_end", "num_steps",
                    "epsilon_decay_steps", "episode_cap"},
                   "solver.qlearn");
        solver.qlearn.alpha = get_or<double>(q, "alpha", solver.qlearn.alpha);
        solver.qlearn.epsilon_start =
            get_or<double>(q, "epsilon_start", solver.qlearn.epsilon_start);
        solver.qlearn.epsilon_end =
            get_or<double>(q, "epsilon_end", solver.qlearn.epsilon_end);
        solver.qlearn.num_steps =
            get_or<long>(q, "num_steps", solver.qlearn.num_steps);
        solver.qlearn.epsilon_decay_steps = get_or<long>(
            q, "epsilon_decay_steps", solver.qlearn.epsilon_decay_steps);
        solver.qlearn.episode_cap =
            get_or<long>(q, "episode_cap", solver.qlearn.episode_cap);
    }
    return solver;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

struct LoadedRun {
    RunConfig cfg;
    TabularMOMDP env;
    json manifest_config;
};

LoadedRun load_run(const std::string& config_path, const CliOverrides& ov) {
    LoadedRun lr;
    json doc = load_json(config_path);
    lr.cfg = parse_run_config(doc);
    if (!ov.out.empty()) lr.cfg.output = ov.out;
    if (ov.seed) lr.cfg.seed = *ov.seed;
    doc["seed"] = lr.cfg.seed;
    doc["output"] = lr.cfg.output;
    lr.manifest_config = doc;
    lr.env = build_env(lr.cfg.environment, lr.cfg.seed);
    return lr;
}

void write_manifest(const std::string& dir, const LoadedRun& lr) {
    json manifest;
    manifest["seed"] = lr.cfg.seed;
    manifest["algorithm"] = lr.cfg.algorithm;
    manifest["environment"] = lr.cfg.environment;
    manifest["config"] = lr.manifest_config;
    manifest["versions"] = {{"artifact", "1.0.0"}, {"format", 1}};
    std::ofstream out(dir + "/manifest.json");
    if (!out)
        throw std::runtime_error("cannot write manifest in: " + dir);
    out << manifest.dump(2) << '\n';
}

} // namespace

RunConfig parse_run_config(const json& j) {
    check_keys(j,
               {"environment", "algorithm", "solver", "sfols", "wcpi", "sip",
                "random_weights", "metrics", "evaluation", "lifelong", "seed",
                "output", "save_sf_tables"},
               "config");
    RunConfig cfg;
    if (!j.contains("environment"))
        throw ConfigError("config: missing 'environment'");
    cfg.environment = j.at("environment");
    cfg.algorithm = get_or<std::string>(j, "algorithm", cfg.algorithm);
    if (cfg.algorithm != "sfols" && cfg.algorithm != "wcpi" &&
        cfg.algorithm != "sip" && cfg.algorithm != "random_weights")
        throw ConfigError("config: unknown algorithm '" + cfg.algorithm + "'");
    if (j.contains("solver")) cfg.solver = parse_solver(j.at("solver"));
    if (j.contains("sfols")) {
        const json& s = j.at("sfols");
        check_keys(s, {"epsilon", "max_iterations"}, "sfols");
        cfg.epsilon = get_or<double>(s, "epsilon", cfg.epsilon);
        cfg.max_iterations =
            get_or<int>(s, "max_iterations", cfg.max_iterations);
    }
    if (j.contains("wcpi")) {
        const json& s = j.at("wcpi");
        check_keys(s, {"max_iterations"}, "wcpi");
        cfg.wcpi_max_iters =
            get_or<int>(s, "max_iterations", cfg.wcpi_max_iters);
    }
    if (j.contains("sip")) {
        const json& s = j.at("sip");
        check_keys(s, {"delta"}, "sip");
        cfg.sip_delta = get_or<double>(s, "delta", cfg.sip_delta);
    }
    if (j.contains("random_weights")) {
        const json& s = j.at("random_weights");
        check_keys(s, {"num_iters"}, "random_weights");
        cfg.random_iters = get_or<int>(s, "num_iters", cfg.random_iters);
    }
    if (j.contains("metrics")) {
        const json& s = j.at("metrics");
        check_keys(s, {"num_weights", "seed", "hv_ref"}, "metrics");
        cfg.metrics.num_weights =
            get_or<int>(s, "num_weights", cfg.metrics.num_weights);
        cfg.metrics.seed =
            get_or<std::uint64_t>(s, "seed", cfg.metrics.seed);
        if (s.contains("hv_ref")) {
            const auto& r = s.at("hv_ref");
            if (!r.is_array() || r.empty())
                throw ConfigError("metrics.hv_ref must be a numeric array");
            Vector ref(static_cast<Eigen::Index>(r.size()));
            Eigen::Index i = 0;
            for (const auto& x : r) ref[i++] = x.get<double>();
            cfg.metrics.hv_ref = ref;
        }
    }
    if (j.contains("evaluation")) {
        const json& s = j.at("evaluation");
        check_keys(s, {"num_weights"}, "evaluation");
        cfg.eval_num_weights =
            get_or<int>(s, "num_weights", cfg.eval_num_weights);
        if (cfg.eval_num_weights < 0)
            throw ConfigError("evaluation.num_weights must be >= 0");
    }
    if (j.contains("lifelong")) {
        const json& s = j.at("lifelong");
        check_keys(s, {"phases", "steps_per_phase"}, "lifelong");
        cfg.lifelong_phases = get_or<int>(s, "phases", cfg.lifelong_phases);
        cfg.lifelong_steps =
            get_or<long>(s, "steps_per_phase", cfg.lifelong_steps);
    }
    cfg.save_sf_tables =
        get_or<bool>(j, "save_sf_tables", cfg.save_sf_tables);
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
    cfg.output = get_or<std::string>(j, "output", cfg.output);
    return cfg;
}

TabularMOMDP build_env(const json& env, std::uint64_t global_seed) {
    if (!env.is_object() || !env.contains("name"))
        throw ConfigError("environment: missing 'name'");
    const std::string name = env.at("name").get<std::string>();
    if (name == "toy3") {
        check_keys(env, {"name"}, "environment");
        return make_toy3();
    }
    if (name == "dst") {
        check_keys(env,
                   {"name", "rows", "cols", "gamma", "time_penalty", "start",
                    "treasures"},
                   "environment");
        DSTConfig cfg;
        cfg.rows = get_or<int>(env, "rows", cfg.rows);
        cfg.cols = get_or<int>(env, "cols", cfg.cols);
        cfg.gamma = get_or<double>(env, "gamma", cfg.gamma);
        cfg.time_penalty =
            get_or<double>(env, "time_penalty", cfg.time_penalty);
        cfg.start = get_cell(env, "start", cfg.start);
        if (env.contains("treasures")) {
            cfg.treasures.clear();
            for (const auto& t : env.at("treasures")) {
                if (!t.is_array() || t.size() != 3)
                    throw ConfigError("dst treasures entries must be "
                                      "[row, col, value]");
                cfg.treasures.push_back({t[0].get<int>(), t[1].get<int>(),
                                         t[2].get<double>()});
            }
        }
        return build_dst(cfg);
    }
    if (name == "four_room") {
        check_keys(env,
                   {"name", "size", "instances_per_type", "gamma", "start",
                    "goal"},
                   "environment");
        FourRoomConfig cfg;
        cfg.size = get_or<int>(env, "size", cfg.size);
        cfg.gamma = get_or<double>(env, "gamma", cfg.gamma);
        cfg.start = get_cell(env, "start", cfg.start);
        cfg.goal = get_cell(env, "goal", cfg.goal);
        const int per_type = get_or<int>(env, "instances_per_type", 4);
        if (per_type < 1 ||
            per_type > static_cast<int>(cfg.objects[0].size()))
            throw ConfigError("four_room.instances_per_type must be in "
                              "1..4");
        for (auto& cells : cfg.objects)
            cells.resize(static_cast<std::size_t>(per_type));
        return build_four_room(cfg);
    }
    if (name == "random") {
        check_keys(env,
                   {"name", "num_states", "num_actions", "d",
                    "terminal_prob", "gamma"},
                   "environment");
        const int S = get_or<int>(env, "num_states", 6);
        const int A = get_or<int>(env, "num_actions", 3);
        const int d = get_or<int>(env, "d", 2);
        const double tp = get_or<double>(env, "terminal_prob", 0.0);
        const double gamma = get_or<double>(env, "gamma", 0.95);
        return build_random_momdp(mix64(global_seed ^ mix64(kEnvStream)), S,
                                  A, d, tp, gamma);
    }
    if (name == "one_hot") {
        check_keys(env, {"name", "inner"}, "environment");
        if (!env.contains("inner"))
            throw ConfigError("one_hot environment: missing 'inner'");
        return one_hot_wrap(build_env(env.at("inner"), global_seed));
    }
    throw ConfigError("environment: unknown name '" + name + "'");
}

int cmd_run(const std::string& config_path, const CliOverrides& ov) {
    return run_guarded([&]() {
        LoadedRun lr = load_run(config_path, ov);
        const RunConfig& cfg = lr.cfg;

        RunResult res;
        if (cfg.algorithm == "sfols") {
            SFOLSConfig sc;
            sc.epsilon = cfg.epsilon;
            sc.max_iterations = cfg.max_iterations;
            sc.solver = cfg.solver;
            sc.seed = cfg.seed;
            sc.metrics = cfg.metrics;
            res = sfols_run(lr.env, sc);
        } else {
            BaselineConfig bc;
            bc.solver = cfg.solver;
            bc.seed = cfg.seed;
            bc.metrics = cfg.metrics;
            if (cfg.algorithm == "wcpi")
                res = wcpi_run(lr.env, bc, cfg.wcpi_max_iters);
            else if (cfg.algorithm == "sip")
                res = sip_run(lr.env, bc, cfg.sip_delta);
            else
                res = random_weights_run(lr.env, bc, cfg.random_iters);
        }

        std::filesystem::create_directories(cfg.output);
        write_manifest(cfg.output, lr);
        write_iterations_csv(cfg.output + "/iterations.csv", res, cfg.seed,
                             lr.env.d);
        json ccs;
        ccs["seed"] = cfg.seed;
        ccs["algorithm"] = res.algorithm;
        ccs["d"] = lr.env.d;
        ccs["entries"] = sf_set_to_json(res.set, cfg.save_sf_tables);
        std::ofstream out(cfg.output + "/ccs.json");
        if (!out)
            throw std::runtime_error("cannot write ccs.json in: " +
                                     cfg.output);
        out << ccs.dump(2) << '\n';
        return 0;
    });
}

int cmd_eval(const std::string& config_path, const std::string& ccs_path,
             const CliOverrides& ov) {
    return run_guarded([&]() {
        LoadedRun lr = load_run(config_path, ov);
        const json dump = load_json(ccs_path);
        const json& entries =
            dump.is_array() ? dump : dump.at("entries");
        const SFSet set = sf_set_from_json(entries, lr.env, lr.cfg.solver.tol);
        if (set.empty())
            throw ConfigError(ccs_path + ": empty SF set");

        const auto weights = sample_simplex_weights(
            lr.cfg.eval_num_weights, lr.env.d, lr.cfg.seed);
        EvaluationReport rep;
        if (!weights.empty())
            rep = evaluate_policy_set(lr.env, set, weights,
                                      lr.cfg.solver.tol);
        rep.seed = lr.cfg.seed;

        std::filesystem::create_directories(lr.cfg.output);
        write_eval_csv(lr.cfg.output + "/eval.csv", rep, lr.cfg.seed,
                       lr.env.d);
        return 0;
    });
}

int cmd_lifelong(const std::string& config_path, const std::string& ccs_path,
                 int phases, long steps_per_phase, const CliOverrides& ov) {
    return run_guarded([&]() {
        LoadedRun lr = load_run(config_path, ov);
        const json dump = load_json(ccs_path);
        const json& entries =
            dump.is_array() ? dump : dump.at("entries");
        const SFSet set = sf_set_from_json(entries, lr.env, lr.cfg.solver.tol);
        if (set.empty())
            throw ConfigError(ccs_path + ": empty SF set");

        const auto trace = lifelong_eval(lr.env, set, phases,
                                         steps_per_phase, lr.cfg.seed,
                                         lr.cfg.solver.tol);
        std::filesystem::create_directories(lr.cfg.output);
        write_lifelong_csv(lr.cfg.output + "/lifelong.csv", trace,
                           lr.cfg.seed, lr.env.d);
        return 0;
    });
}

} // namespace sfols
