#include <cstdint>
#include <string>

#include "CLI11.hpp"

#include "sfols/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Convex-coverage-set construction over successor features "
                 "and zero-shot transfer evaluation"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::string ccs;
    std::uint64_t seed = 0;
    int phases = 5;
    long steps = 10000;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "run configuration file (JSON)")
            ->required();
        sub->add_option("--out", out, "output directory (overrides config)");
        return sub->add_option("--seed", seed,
                               "global seed (overrides config)");
    };

    CLI::App* run = app.add_subcommand(
        "run", "build a policy set and write iterations.csv + ccs.json");
    CLI::Option* run_seed = add_common(run);

    CLI::App* eval = app.add_subcommand(
        "eval", "evaluate a stored SF set on sampled test weights");
    CLI::Option* eval_seed = add_common(eval);
    eval->add_option("--ccs", ccs, "SF-set dump (ccs.json)")->required();

    CLI::App* lifelong = app.add_subcommand(
        "lifelong", "zero-shot lifelong evaluation of a stored SF set");
    CLI::Option* ll_seed = add_common(lifelong);
    lifelong->add_option("--ccs", ccs, "SF-set dump (ccs.json)")->required();
    lifelong->add_option("--phases", phases, "number of task phases");
    lifelong->add_option("--steps", steps, "environment steps per phase");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    sfols::CliOverrides ov;
    ov.out = out;
    if (run->parsed() && run_seed->count() > 0) ov.seed = seed;
    if (eval->parsed() && eval_seed->count() > 0) ov.seed = seed;
    if (lifelong->parsed() && ll_seed->count() > 0) ov.seed = seed;

    if (run->parsed()) return sfols::cmd_run(config, ov);
    if (eval->parsed()) return sfols::cmd_eval(config, ccs, ov);
    return sfols::cmd_lifelong(config, ccs, phases, steps, ov);
}
