#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "graybox/experiment.hpp"
#include "graybox/walsh.hpp"

namespace fs = std::filesystem;

using graybox::aggregate;
using graybox::cmd_analyze;
using graybox::cmd_solve;
using graybox::cmd_transform;
using graybox::ExperimentConfig;
using graybox::run_batch;
using graybox::RunRecord;
using graybox::runs_csv;
using graybox::spec_hash;
using graybox::SweepCell;
using graybox::sweep_csv;

namespace {

// Swallows the per-file "wrote ..." lines the commands print.
struct CoutCapture {
    CoutCapture() : old(std::cout.rdbuf(buffer.rdbuf())) {}
    ~CoutCapture() { std::cout.rdbuf(old); }
    std::ostringstream buffer;
    std::streambuf* old;
};

struct TempDir {
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("graybox_unit_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path path;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("spec hashing implements the standard 64-bit FNV-1a") {
    CHECK(spec_hash("") == 0xcbf29ce484222325ull);
    CHECK(spec_hash("a") == 0xaf63dc4c8601ec8cull);
    CHECK(spec_hash("onemax:n=10") != spec_hash("onemax:n=11"));
}

TEST_CASE("a batch runs every optimizer for every seed and keeps row order") {
    auto rows = run_batch("onemax:n=30", {"gbophe:vig=wdvig,strategy=lttop"}, 3, 100000, 1);
    REQUIRE(rows.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(rows[static_cast<size_t>(i)].problem == "onemax:n=30");
        CHECK(rows[static_cast<size_t>(i)].n == 30);
        CHECK(rows[static_cast<size_t>(i)].noise_c == 0);
        CHECK(rows[static_cast<size_t>(i)].optimizer == "gbophe:vig=wdvig,strategy=lttop");
        CHECK(rows[static_cast<size_t>(i)].seed == static_cast<uint64_t>(1 + i));
        CHECK(rows[static_cast<size_t>(i)].success);
        CHECK(rows[static_cast<size_t>(i)].best_fitness == 30.0);
        REQUIRE(rows[static_cast<size_t>(i)].ffe_to_optimum.has_value());
    }
}

TEST_CASE("batches are reproducible run for run") {
    auto a = run_batch("dec:k=4,n=16", {"p3"}, 3, 30000, 7);
    auto b = run_batch("dec:k=4,n=16", {"p3"}, 3, 30000, 7);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].success == b[i].success);
        CHECK(a[i].ffe_to_optimum == b[i].ffe_to_optimum);
        CHECK(a[i].best_fitness == b[i].best_fitness);
    }
}

TEST_CASE("generated instances are shared across optimizers but vary per run") {
    auto rows = run_batch("nk:n=12,k=2", {"p3", "ltgomea"}, 2, 50000, 5);
    REQUIRE(rows.size() == 4);
    // rows: p3 run0, p3 run1, ltgomea run0, ltgomea run1
    CHECK(rows[0].problem == rows[2].problem);
    CHECK(rows[1].problem == rows[3].problem);
    CHECK(rows[0].problem != rows[1].problem);
    CHECK(rows[0].problem.rfind("nk:n=12,k=2,seed=", 0) == 0);

    // an explicit seed pins the instance for every run
    auto pinned = run_batch("nk:n=12,k=2,seed=9", {"p3"}, 2, 50000, 5);
    CHECK(pinned[0].problem == "nk:n=12,k=2,seed=9");
    CHECK(pinned[1].problem == "nk:n=12,k=2,seed=9");
}

TEST_CASE("batch validation names the offending token") {
    CHECK_THROWS_AS(run_batch("onemax:n=10", {"warpdrive"}, 1, 1000, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_batch("onemax:n=10", {"p3"}, 0, 1000, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_batch("onemax:n=10", {}, 1, 1000, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_batch("onemax:n=10", {"p3"}, 1, 0, 1), std::invalid_argument);
    try {
        run_batch("onemax:n=10", {"warpdrive"}, 1, 1000, 1);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("warpdrive") != std::string::npos);
    }
}

TEST_CASE("aggregation recomputes exactly what the rows say") {
    std::vector<RunRecord> rows;
    auto add = [&](const std::string& opt, bool ok, uint64_t ffe) {
        RunRecord r;
        r.problem = "toy";
        r.n = 8;
        r.noise_c = 2;
        r.optimizer = opt;
        r.seed = rows.size();
        r.success = ok;
        if (ok) r.ffe_to_optimum = ffe;
        r.best_fitness = 1.0;
        rows.push_back(r);
    };
    add("A", true, 100);
    add("A", true, 200);
    add("A", false, 0);
    add("B", false, 0);

    auto cells = aggregate("label", rows);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].problem == "label");
    CHECK(cells[0].optimizer == "A");
    CHECK(cells[0].runs == 3);
    CHECK(cells[0].n == 8);
    CHECK(cells[0].noise_c == 2);
    CHECK(cells[0].success_rate == doctest::Approx(2.0 / 3.0));
    REQUIRE(cells[0].median_ffe_success.has_value());
    CHECK(*cells[0].median_ffe_success == 150.0);  // even count: middle pair mean
    CHECK(cells[1].optimizer == "B");
    CHECK(cells[1].success_rate == 0.0);
    CHECK_FALSE(cells[1].median_ffe_success.has_value());
}

TEST_CASE("run rows serialize with a pinned header and quoted commas") {
    RunRecord ok;
    ok.problem = "dec:k=4,n=8,o=0";
    ok.n = 8;
    ok.noise_c = 0;
    ok.optimizer = "gbophe:vig=px";
    ok.seed = 3;
    ok.success = true;
    ok.ffe_to_optimum = 42;
    ok.best_fitness = 8.0;
    RunRecord bad;
    bad.problem = "onemax:n=9";
    bad.n = 9;
    bad.noise_c = 0;
    bad.optimizer = "gbophe:vig=wdvig,strategy=lttop";
    bad.seed = 4;
    bad.success = false;
    bad.best_fitness = 7.5;
    CHECK(runs_csv({ok, bad}) ==
          "problem,n,noise_c,optimizer,seed,success,ffe_to_optimum,best_fitness\n"
          "\"dec:k=4,n=8,o=0\",8,0,gbophe:vig=px,3,1,42,8\n"
          "onemax:n=9,9,0,\"gbophe:vig=wdvig,strategy=lttop\",4,0,,7.5\n");
}

TEST_CASE("sweep cells serialize with a pinned header") {
    SweepCell c;
    c.problem = "onemax:n=16";
    c.n = 16;
    c.noise_c = 1;
    c.optimizer = "p3";
    c.runs = 2;
    c.success_rate = 0.5;
    c.median_ffe_success = 321.0;
    SweepCell d = c;
    d.success_rate = 0.0;
    d.median_ffe_success.reset();
    CHECK(sweep_csv({c, d}) ==
          "problem,n,noise_c,optimizer,runs,success_rate,median_ffe_success\n"
          "onemax:n=16,16,1,p3,2,0.5,321\n"
          "onemax:n=16,16,1,p3,2,0,\n");
}

TEST_CASE("solve writes its rows and reruns byte-identically") {
    TempDir t1, t2;
    ExperimentConfig cfg;
    cfg.problem = "onemax:n=15";
    cfg.optimizers = {"p3"};
    cfg.reps = 2;
    cfg.max_ffe = 20000;
    cfg.seed = 1;
    cfg.out_dir = t1.path.string();
    {
        CoutCapture quiet;
        CHECK(cmd_solve(cfg) == 0);
        cfg.out_dir = t2.path.string();
        CHECK(cmd_solve(cfg) == 0);
    }
    std::string first = slurp(t1.path / "runs.csv");
    CHECK(first == slurp(t2.path / "runs.csv"));
    // header plus one line per run
    CHECK(std::count(first.begin(), first.end(), '\n') == 3);
}

TEST_CASE("transform writes a readable expansion file") {
    TempDir t;
    ExperimentConfig cfg;
    cfg.problem = "onemax:n=6";
    cfg.out_dir = t.path.string();
    cfg.out_file = "six.walsh";
    {
        CoutCapture quiet;
        CHECK(cmd_transform(cfg) == 0);
    }
    graybox::WalshExpansion e = graybox::read_walsh_text(slurp(t.path / "six.walsh"));
    CHECK(e.n() == 6);
    CHECK(e.term_count() == 7);
}

TEST_CASE("analysis artifacts carry pinned headers") {
    TempDir t;
    ExperimentConfig cfg;
    cfg.problem = "onemax:n=6+snoise(nVol=1.0)";
    cfg.reps = 2;
    cfg.seed = 4;
    cfg.checks = {"static", "nonlinearity"};
    cfg.out_dir = t.path.string();
    {
        CoutCapture quiet;
        CHECK(cmd_analyze(cfg) == 0);
    }
    std::string epi = slurp(t.path / "epistasis.csv");
    CHECK(epi.rfind("instance,check,raw_epistasis,denoised_epistasis\n", 0) == 0);
    std::string cli = slurp(t.path / "cliques.csv");
    CHECK(cli.rfind("instance,check,clique_count,min_len,max_len\n", 0) == 0);
    std::string xs = slurp(t.path / "cross_section.csv");
    CHECK(xs.rfind("step,fitness_original,fitness_surrogate\n", 0) == 0);
    std::string summary = slurp(t.path / "epistasis_summary.csv");
    CHECK(summary.rfind("check,raw_min,raw_median,raw_max,denoised_min,denoised_median,denoised_max\n",
                        0) == 0);
    // two checks, two instances each
    CHECK(std::count(epi.begin(), epi.end(), '\n') == 5);
}
