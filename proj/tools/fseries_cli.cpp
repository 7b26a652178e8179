#include <CLI11.hpp>

#include <iostream>

#include "fseries/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact Fourier analysis of p-adic affine digit systems"};
    app.require_subcommand(1);
    fseries::RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--spec", cfg.spec_path, "spec file (JSON)");
        sub->add_option("--frame", cfg.frame_path, "frame file (JSON)");
        sub->add_option("--eval", cfg.eval_path, "evaluation file (JSON)");
        sub->add_option("--index", cfg.index, "multi-index n");
        sub->add_option("--tmax", cfg.tmax, "dump table on |t| <= p^tmax");
        sub->add_option("--nmax", cfg.nmax, "depth for scans and partial sums");
        sub->add_option("--point", cfg.point, "point, pre:<digits>;per:<digits>");
        sub->add_option("--place", cfg.place, "place, inf or prime:<ell>");
        sub->add_option("--format", cfg.format, "json or csv");
        sub->add_option("--seed", cfg.seed, "seed for randomized suites");
        sub->add_option("--precision", cfg.precision, "interval precision bits");
    };

    add_common(app.add_subcommand("transform", "dump the transform table of one index"));
    add_common(app.add_subcommand("product", "dump the whole lattice below an index"));
    auto* verify = app.add_subcommand("verify", "run an exact identity suite");
    add_common(verify);
    verify->add_option("--suite", cfg.suite, "suite name or 'all'");
    add_common(app.add_subcommand("breakdown", "scan breakdown loci up to --nmax"));
    add_common(app.add_subcommand("converge", "exact partial-sum decay table at a point"));
    auto* hydra = app.add_subcommand("hydra", "orbit, numen, and pole reports");
    auto* orbit = hydra->add_subcommand("orbit", "iterate the shortened qx+1 map");
    auto* numen = hydra->add_subcommand("numen", "emit the numen spec and values");
    auto* poles = hydra->add_subcommand("poles", "q-denominator diagnostics");
    for (CLI::App* sub : {orbit, numen, poles}) {
        sub->add_option("--q", cfg.q_value, "odd multiplier q");
        sub->add_option("--start", cfg.start, "orbit start value");
        sub->add_option("--max-steps", cfg.max_steps, "orbit step budget");
        sub->add_option("--bound", cfg.magnitude_bound, "escape magnitude bound");
        sub->add_option("--nmax", cfg.nmax, "how many numen values to emit");
    }

    CLI11_PARSE(app, argc, argv);
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.subcommand == "hydra") {
        auto subs = hydra->get_subcommands();
        if (subs.empty()) {
            std::cerr << "hydra needs one of: orbit, numen, poles\n";
            return 2;
        }
        cfg.hydra_command = subs.front()->get_name();
    }
    return fseries::run_cli(cfg, std::cout);
}
