// graybox: gray-box pseudo-boolean optimization toolkit.
//
// Subcommands:
//   solve      run optimizers on one problem, one CSV row per run
//   sweep      scalability sweep over problem sizes x noise levels
//   analyze    toy-scale structure analysis (epistasis, cliques, spectra)
//   denoise    optimum-preserving surrogate of one instance
//   transform  write an instance's Walsh expansion to a text file
//
// Exit codes: 0 success, 2 usage error, 3 runtime failure.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "graybox/experiment.hpp"

namespace {

std::string default_out_dir() {
    const char* env = std::getenv("GRAYBOX_OUTDIR");
    return env && *env ? env : ".";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gray-box pseudo-boolean optimization toolkit"};
    app.require_subcommand(1);

    graybox::ExperimentConfig config;
    config.out_dir = default_out_dir();
    int rc = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", config.seed, "base seed; run i uses seed+i")
            ->capture_default_str();
        sub->add_option("--out-dir", config.out_dir,
                        "output directory (default: $GRAYBOX_OUTDIR or .)");
    };
    auto add_problem = [&](CLI::App* sub) {
        sub->add_option("--problem", config.problem,
                        "problem spec, e.g. dec:k=8,n=40+noise(c=5)")
            ->required();
    };
    auto add_budget = [&](CLI::App* sub) {
        sub->add_option("--reps", config.reps, "repetitions")->capture_default_str();
        sub->add_option("--max-ffe", config.max_ffe, "evaluation budget per run")
            ->capture_default_str();
        sub->add_option("--optimizer", config.optimizers,
                        "optimizer spec (repeatable), e.g. gbophe:vig=wdvig,strategy=lttop")
            ->required();
    };

    CLI::App* solve = app.add_subcommand("solve", "run optimizers on one problem");
    add_problem(solve);
    add_budget(solve);
    add_common(solve);
    solve->callback([&] { rc = graybox::cmd_solve(config); });

    CLI::App* sweep = app.add_subcommand("sweep", "success-rate sweep over sizes x noise levels");
    sweep->add_option("--problem", config.problem,
                      "problem template without n=/L=, e.g. dec:k=8")
        ->required();
    add_budget(sweep);
    sweep->add_option("--sizes", config.sizes, "problem sizes, e.g. 16,24,40")
        ->required()
        ->delimiter(',');
    sweep->add_option("--noise", config.noise_cs,
                      "noise coefficients per variable (0 = none), e.g. 0,5")
        ->delimiter(',');
    add_common(sweep);
    sweep->callback([&] { rc = graybox::cmd_sweep(config); });

    CLI::App* analyze = app.add_subcommand("analyze", "toy-scale structure analysis");
    add_problem(analyze);
    analyze->add_option("--checks", config.checks,
                        "dependency checks (default: static,nonlinearity,nonmonotonicity,2dled)")
        ->delimiter(',');
    analyze->add_option("--reps", config.reps, "instances to analyze")->capture_default_str();
    add_common(analyze);
    analyze->callback([&] { rc = graybox::cmd_analyze(config); });

    CLI::App* denoise = app.add_subcommand("denoise", "optimum-preserving surrogate");
    add_problem(denoise);
    add_common(denoise);
    denoise->callback([&] { rc = graybox::cmd_denoise(config); });

    CLI::App* transform = app.add_subcommand("transform", "write the Walsh expansion");
    add_problem(transform);
    transform->add_option("--out", config.out_file, "output file name (default expansion.walsh)");
    add_common(transform);
    transform->callback([&] { rc = graybox::cmd_transform(config); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return rc;
}
