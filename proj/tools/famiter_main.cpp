#include <CLI11.hpp>

#include "famiter/cli.hpp"
#include "famiter/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"famiter: implicit iteration with errors for finite families "
                 "of mappings"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string zoo_name;
    int d = 8;
    long samples = 500;
    std::uint64_t check_seed = 12345;
    famiter::RunOverrides overrides;
    std::uint64_t seed_override = 0;
    long horizon_override = 0;

    auto* run = app.add_subcommand("run", "run a config, write trace.csv + summary.json");
    run->add_option("--config", config_path, "config file (JSON)")->required();
    run->add_option("--out-dir", out_dir, "output directory");
    auto* seed_opt = run->add_option("--seed", seed_override, "override the experiment seed");
    auto* horizon_opt = run->add_option("--horizon", horizon_override, "override the horizon");
    run->add_flag("--allow-noncontractive", overrides.allow_noncontractive,
                  "run the inner solver relaxed when the contraction preflight fails");

    auto* validate = app.add_subcommand("validate", "check the schedule conditions only");
    validate->add_option("--config", config_path, "config file (JSON)")->required();

    auto* check = app.add_subcommand("check-mappings", "run a zoo entry's declared checks");
    check->add_option("name", zoo_name, "zoo entry name")->required();
    check->add_option("--d", d, "dimension");
    check->add_option("--samples", samples, "sample count");
    check->add_option("--seed", check_seed, "sampling seed");

    auto* list = app.add_subcommand("zoo-list", "list the documented zoo names");
    (void)list;

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        if (seed_opt->count() > 0) overrides.seed = seed_override;
        if (horizon_opt->count() > 0) overrides.horizon = horizon_override;
        return famiter::cmd_run(config_path, out_dir, overrides);
    }
    if (validate->parsed()) return famiter::cmd_validate(config_path);
    if (check->parsed())
        return famiter::cmd_check_mappings(zoo_name, d, samples, check_seed);
    return famiter::cmd_zoo_list();
}
