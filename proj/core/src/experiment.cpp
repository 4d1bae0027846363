#include "graybox/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <mutex>
#include <thread>

#include "graybox/analysis.hpp"
#include "graybox/optimizers.hpp"
#include "graybox/problems.hpp"
#include "graybox/rng.hpp"
#include "graybox/walsh.hpp"
#include "spec_util.hpp"

namespace graybox {

using detail::fail;
using detail::fmt_double;
using detail::require;

uint64_t spec_hash(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

// RFC 4180 field: quoted only when it contains a comma, quote, or newline.
std::string csv_field(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2.0;
}

std::filesystem::path out_path(const ExperimentConfig& config, const std::string& name) {
    std::filesystem::path dir = config.out_dir.empty() ? "." : config.out_dir;
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_file(const std::filesystem::path& path, const std::string& content, size_t rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content) || !f.flush())
        throw std::runtime_error("cannot write '" + path.string() + "'");
    std::cout << "wrote " << path.string() << " (" << rows << " rows)\n";
}

uint64_t instance_auto_seed(uint64_t problem_hash, uint64_t run_seed) {
    return keyed_u64(mix64(problem_hash), run_seed);
}

}  // namespace

std::vector<RunRecord> run_batch(const std::string& problem_spec,
                                 const std::vector<std::string>& optimizer_specs, int reps,
                                 uint64_t max_ffe, uint64_t base_seed) {
    require(reps >= 1, "reps must be >= 1");
    require(max_ffe >= 1, "max-ffe must be >= 1");
    require(!optimizer_specs.empty(), "need at least one optimizer");
    std::vector<OptimizerConfig> opts;
    opts.reserve(optimizer_specs.size());
    for (const auto& s : optimizer_specs) opts.push_back(parse_optimizer_spec(s));

    const uint64_t ph = spec_hash(problem_spec);
    const size_t jobs = opts.size() * static_cast<size_t>(reps);
    std::vector<RunRecord> out(jobs);
    std::atomic<size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr err;

    auto worker = [&] {
        for (;;) {
            size_t j = next.fetch_add(1);
            if (j >= jobs) return;
            try {
                const OptimizerConfig& oc = opts[j / static_cast<size_t>(reps)];
                const uint64_t run_seed = base_seed + j % static_cast<size_t>(reps);
                ProblemInstance p =
                    parse_problem_spec(problem_spec, instance_auto_seed(ph, run_seed));
                Budget budget;
                budget.max_ffe = max_ffe;
                Rng rng(mix64(run_seed ^ mix64(spec_hash(oc.canonical))));
                RunResult r = run_optimizer(p, oc, budget, rng);
                out[j] = RunRecord{p.name,  p.n,       p.noise_c,        oc.canonical,
                                   run_seed, r.success, r.ffe_to_optimum, r.best_fitness};
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    size_t workers = std::min<size_t>(jobs, hw ? hw : 1);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

std::vector<SweepCell> aggregate(const std::string& problem_label,
                                 const std::vector<RunRecord>& rows) {
    std::vector<SweepCell> cells;
    for (const RunRecord& r : rows) {
        auto it = std::find_if(cells.begin(), cells.end(),
                               [&](const SweepCell& c) { return c.optimizer == r.optimizer; });
        if (it == cells.end()) {
            cells.push_back(SweepCell{problem_label, r.n, r.noise_c, r.optimizer, 0, 0.0, {}});
            it = std::prev(cells.end());
        }
        ++it->runs;
        if (r.success) it->success_rate += 1.0;  // count for now; divided below
    }
    for (SweepCell& c : cells) {
        std::vector<double> ffes;
        for (const RunRecord& r : rows)
            if (r.optimizer == c.optimizer && r.success && r.ffe_to_optimum)
                ffes.push_back(static_cast<double>(*r.ffe_to_optimum));
        if (!ffes.empty()) c.median_ffe_success = median(std::move(ffes));
        c.success_rate /= c.runs;
    }
    return cells;
}

std::string runs_csv(const std::vector<RunRecord>& rows) {
    std::string s = "problem,n,noise_c,optimizer,seed,success,ffe_to_optimum,best_fitness\n";
    for (const RunRecord& r : rows) {
        s += csv_field(r.problem) + ',' + std::to_string(r.n) + ',' + std::to_string(r.noise_c) +
             ',' + csv_field(r.optimizer) + ',' + detail::fmt_u64(r.seed) + ',' +
             (r.success ? "1" : "0") + ',' +
             (r.ffe_to_optimum ? detail::fmt_u64(*r.ffe_to_optimum) : std::string()) + ',' +
             fmt_double(r.best_fitness) + '\n';
    }
    return s;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::string s = "problem,n,noise_c,optimizer,runs,success_rate,median_ffe_success\n";
    for (const SweepCell& c : cells) {
        s += csv_field(c.problem) + ',' + std::to_string(c.n) + ',' + std::to_string(c.noise_c) +
             ',' + csv_field(c.optimizer) + ',' + std::to_string(c.runs) + ',' +
             fmt_double(c.success_rate) + ',' +
             (c.median_ffe_success ? fmt_double(*c.median_ffe_success) : std::string()) + '\n';
    }
    return s;
}

int cmd_solve(const ExperimentConfig& config) {
    std::vector<RunRecord> rows =
        run_batch(config.problem, config.optimizers, config.reps, config.max_ffe, config.seed);
    write_file(out_path(config, "runs.csv"), runs_csv(rows), rows.size());
    return 0;
}

namespace {

std::string sweep_cell_spec(const std::string& tmpl, int size, int noise_c) {
    require(!tmpl.empty(), "sweep: empty problem template");
    require(tmpl.find("n=") == std::string::npos && tmpl.find("L=") == std::string::npos,
            "sweep: problem template must omit n=/L= (filled from --sizes)");
    require(tmpl.find('+') == std::string::npos,
            "sweep: problem template must omit noise suffixes (filled from --noise)");
    std::string key = tmpl.rfind("isg", 0) == 0 ? "L=" : "n=";
    std::string s =
        tmpl + (tmpl.find(':') == std::string::npos ? ":" : ",") + key + std::to_string(size);
    if (noise_c > 0) s += "+noise(c=" + std::to_string(noise_c) + ")";
    return s;
}

}  // namespace

int cmd_sweep(const ExperimentConfig& config) {
    require(!config.sizes.empty(), "sweep: needs at least one size");
    std::vector<int> noise_cs = config.noise_cs.empty() ? std::vector<int>{0} : config.noise_cs;

    std::vector<RunRecord> all_rows;
    std::vector<SweepCell> cells;
    for (int size : config.sizes) {
        for (int c : noise_cs) {
            std::string spec = sweep_cell_spec(config.problem, size, c);
            std::vector<RunRecord> rows =
                run_batch(spec, config.optimizers, config.reps, config.max_ffe, config.seed);
            for (SweepCell& cell : aggregate(spec, rows)) cells.push_back(std::move(cell));
            all_rows.insert(all_rows.end(), std::make_move_iterator(rows.begin()),
                            std::make_move_iterator(rows.end()));
        }
    }

    // Largest size whose success rate reaches 0.8, per optimizer and noise level.
    std::string largest = "optimizer,noise_c,largest_n\n";
    size_t largest_rows = 0;
    for (const auto& spec : config.optimizers) {
        std::string opt = parse_optimizer_spec(spec).canonical;
        for (int c : noise_cs) {
            int best = 0;
            for (const SweepCell& cell : cells)
                if (cell.optimizer == opt && cell.noise_c == c && cell.success_rate >= 0.8)
                    best = std::max(best, cell.n);
            largest += csv_field(opt) + ',' + std::to_string(c) + ',' + std::to_string(best) + '\n';
            ++largest_rows;
        }
    }

    write_file(out_path(config, "runs.csv"), runs_csv(all_rows), all_rows.size());
    write_file(out_path(config, "sweep.csv"), sweep_csv(cells), cells.size());
    write_file(out_path(config, "largest_n.csv"), largest, largest_rows);
    return 0;
}

int cmd_analyze(const ExperimentConfig& config) {
    require(config.reps >= 1, "reps must be >= 1");
    const std::vector<std::string>& checks = config.checks.empty() ? kAnalysisChecks
                                                                   : config.checks;
    const uint64_t ph = spec_hash(config.problem);

    std::string epi = "instance,check,raw_epistasis,denoised_epistasis\n";
    std::string cli = "instance,check,clique_count,min_len,max_len\n";
    std::string minw = "instance,mask_size,min_abs_w\n";
    size_t epi_rows = 0, cli_rows = 0, minw_rows = 0;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_check;
    WalshExpansion first_e, first_surrogate;

    for (int i = 0; i < config.reps; ++i) {
        const uint64_t run_seed = config.seed + static_cast<uint64_t>(i);
        ProblemInstance p = parse_problem_spec(config.problem, instance_auto_seed(ph, run_seed));
        DenoiseReport rep = denoise(p.expansion, checks);
        for (const auto& check : checks) {
            auto [raw, den] = rep.epistasis.at(check);
            epi += csv_field(p.name) + ',' + check + ',' + fmt_double(raw) + ',' +
                   fmt_double(den) + '\n';
            ++epi_rows;
            by_check[check].first.push_back(raw);
            by_check[check].second.push_back(den);
            CliqueStats cs = clique_stats(analysis_vig(rep.surrogate, check));
            cli += csv_field(p.name) + ',' + check + ',' + std::to_string(cs.clique_count) + ',' +
                   std::to_string(cs.min_size) + ',' + std::to_string(cs.max_size) + '\n';
            ++cli_rows;
        }
        for (auto [size, w] : min_abs_coeff_by_mask_size(p.expansion)) {
            minw += csv_field(p.name) + ',' + std::to_string(size) + ',' + fmt_double(w) + '\n';
            ++minw_rows;
        }
        if (i == 0) {
            first_e = p.expansion;
            first_surrogate = rep.surrogate;
        }
    }

    // Per-check min/median/max bands across the repetitions.
    std::string summary =
        "check,raw_min,raw_median,raw_max,denoised_min,denoised_median,denoised_max\n";
    for (const auto& check : checks) {
        auto& [raw, den] = by_check.at(check);
        auto band = [](const std::vector<double>& v) {
            auto [lo, hi] = std::minmax_element(v.begin(), v.end());
            return fmt_double(*lo) + ',' + fmt_double(median(v)) + ',' + fmt_double(*hi);
        };
        summary += check + ',' + band(raw) + ',' + band(den) + '\n';
    }

    // One cross-section between a random optimum and a random minimum of the
    // first instance, traced on both the original and the surrogate.
    Rng xr(mix64(config.seed ^ 0x78736563));
    std::vector<BitVector> optima = first_e.global_optima();
    std::vector<BitVector> minima = first_e.global_minima();
    const BitVector& o = optima[xr.below(optima.size())];
    const BitVector& m = minima[xr.below(minima.size())];
    std::string xsec = "step,fitness_original,fitness_surrogate\n";
    size_t step = 0;
    for (const BitVector& x : cross_section_path(o, m, xr)) {
        xsec += std::to_string(step++) + ',' + fmt_double(first_e.evaluate(x)) + ',' +
                fmt_double(first_surrogate.evaluate(x)) + '\n';
    }

    write_file(out_path(config, "epistasis.csv"), epi, epi_rows);
    write_file(out_path(config, "epistasis_summary.csv"), summary, checks.size());
    write_file(out_path(config, "cliques.csv"), cli, cli_rows);
    write_file(out_path(config, "min_coeff.csv"), minw, minw_rows);
    write_file(out_path(config, "cross_section.csv"), xsec, step);
    return 0;
}

int cmd_denoise(const ExperimentConfig& config) {
    ProblemInstance p =
        parse_problem_spec(config.problem, instance_auto_seed(spec_hash(config.problem), config.seed));
    DenoiseReport rep = denoise(p.expansion);
    std::string csv = "instance,total_terms,removed_terms,retained_terms,optima_preserved\n";
    csv += csv_field(p.name) + ',' + std::to_string(p.expansion.term_count()) + ',' +
           std::to_string(rep.removed_terms) + ',' + std::to_string(rep.retained_terms) + ',' +
           (rep.optima_preserved ? "1" : "0") + '\n';
    write_file(out_path(config, "denoise.csv"), csv, 1);
    write_file(out_path(config, "surrogate.walsh"), write_walsh_text(rep.surrogate),
               rep.surrogate.term_count());
    return 0;
}

int cmd_transform(const ExperimentConfig& config) {
    ProblemInstance p =
        parse_problem_spec(config.problem, instance_auto_seed(spec_hash(config.problem), config.seed));
    std::string name = config.out_file.empty() ? "expansion.walsh" : config.out_file;
    write_file(out_path(config, name), write_walsh_text(p.expansion), p.expansion.term_count());
    return 0;
}

}  // namespace graybox
