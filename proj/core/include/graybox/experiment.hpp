#pragma once

// Seeded batch harness behind the CLI: run pools, aggregation, and CSV
// emission. Re-running any command with an identical configuration produces
// byte-identical output files.
//
// Seeding contract: run i uses seed base+i for the optimizer stream, while
// instance generation draws from an independent stream keyed by the problem
// spec's hash, so every optimizer in a batch sees the same instance for the
// same run index. A seed written explicitly in the spec pins the instance
// across all runs instead.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace graybox {

struct ExperimentConfig {
    std::string problem;                  // problem spec (sweep: template without n=/L=)
    std::vector<std::string> optimizers;  // optimizer specs
    int reps = 30;
    uint64_t max_ffe = 2'000'000;
    uint64_t seed = 1;                // base seed; run i uses base+i
    std::string out_dir = ".";        // output directory, created on demand
    std::string out_file;             // transform: output file name
    std::vector<int> sizes;           // sweep axis: problem sizes (isg: lattice side)
    std::vector<int> noise_cs;        // sweep axis: noise coefficients per variable, 0 = none
    std::vector<std::string> checks;  // analyze: dependency checks (empty = all)
};

struct RunRecord {
    std::string problem;  // canonical instance name (records the seed actually used)
    int n = 0;
    int noise_c = 0;
    std::string optimizer;  // canonical optimizer spec
    uint64_t seed = 0;      // run seed (base + run index)
    bool success = false;
    std::optional<uint64_t> ffe_to_optimum;
    double best_fitness = 0.0;
};

struct SweepCell {
    std::string problem;  // cell spec (template with size and noise filled in)
    int n = 0;
    int noise_c = 0;
    std::string optimizer;
    int runs = 0;
    double success_rate = 0.0;
    std::optional<double> median_ffe_success;
};

// FNV-1a; keys the per-spec instance stream.
uint64_t spec_hash(const std::string& s);

// Every optimizer x rep combination on a shared work pool; rows ordered by
// (optimizer as given, run index). Throws std::invalid_argument on malformed
// specs, naming the offending token.
std::vector<RunRecord> run_batch(const std::string& problem_spec,
                                 const std::vector<std::string>& optimizer_specs, int reps,
                                 uint64_t max_ffe, uint64_t base_seed);

// Aggregates one batch into one cell per optimizer (first-appearance order);
// n and noise_c are taken from each optimizer's first row.
std::vector<SweepCell> aggregate(const std::string& problem_label,
                                 const std::vector<RunRecord>& rows);

std::string runs_csv(const std::vector<RunRecord>& rows);
std::string sweep_csv(const std::vector<SweepCell>& cells);

// Commands behind the CLI subcommands; each writes its CSV artifacts under
// config.out_dir and prints one summary line per file. All return 0;
// configuration errors throw std::invalid_argument (usage) and I/O failures
// std::runtime_error.
int cmd_solve(const ExperimentConfig& config);
int cmd_sweep(const ExperimentConfig& config);
int cmd_analyze(const ExperimentConfig& config);
int cmd_denoise(const ExperimentConfig& config);
int cmd_transform(const ExperimentConfig& config);

}  // namespace graybox
