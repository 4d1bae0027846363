// Microbenchmarks for the hot paths: expansion evaluation, the two exact
// transforms, dynamic graph construction, clustering, and hill climbing.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "graybox/linkage.hpp"
#include "graybox/operators.hpp"
#include "graybox/problems.hpp"
#include "graybox/structure.hpp"
#include "graybox/walsh.hpp"

using namespace graybox;

namespace {

BitVector random_point(Rng& rng, int n) {
    BitVector x(n);
    for (int i = 0; i < n; ++i) x.set(i, rng.coin());
    return x;
}

void bm_evaluate(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ProblemInstance p = make_nk(n, 4, 7);
    Rng rng(1);
    BitVector x = random_point(rng, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(p.expansion.evaluate(x));
        x.flip(static_cast<int>(rng.below(static_cast<uint64_t>(n))));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_evaluate)->Arg(64)->Arg(256)->Arg(1024);

void bm_wht_full(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ProblemInstance p = make_nk(n, 3, 7);
    for (auto _ : state) benchmark::DoNotOptimize(wht_full(p.black_box, n).term_count());
}
BENCHMARK(bm_wht_full)->Arg(10)->Arg(14);

void bm_from_additive(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    AdditiveFunction f;
    f.n = n;
    Rng rng(3);
    for (int i = 0; i < n; ++i) {
        Subfunction sub;
        for (int j = 0; j < 5; ++j) sub.vars.push_back(static_cast<uint16_t>((i + j) % n));
        std::sort(sub.vars.begin(), sub.vars.end());
        sub.table.resize(32);
        for (double& t : sub.table) t = rng.real(-1.0, 1.0);
        f.subs.push_back(std::move(sub));
    }
    for (auto _ : state) benchmark::DoNotOptimize(from_additive(f).term_count());
}
BENCHMARK(bm_from_additive)->Arg(256)->Arg(1024);

void bm_wd_vig(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ProblemInstance p = make_nk(n, 4, 7);
    Rng rng(5);
    BitVector a = random_point(rng, n), b = random_point(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(wd_vig(p.expansion, a, b, true).edge_count());
}
BENCHMARK(bm_wd_vig)->Arg(64)->Arg(256);

void bm_build_forest(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ProblemInstance p = make_nk(n, 4, 7);
    Rng rng(5);
    BitVector a = random_point(rng, n), b = random_point(rng, n);
    InteractionGraph g = wd_vig(p.expansion, a, b, true);
    for (auto _ : state) benchmark::DoNotOptimize(build_forest(g).tree_count());
}
BENCHMARK(bm_build_forest)->Arg(64)->Arg(256);

void bm_fihc(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    ProblemInstance p = make_trap_concat(TrapKind::Dec, 8, n, 0);
    Rng rng(9);
    for (auto _ : state) {
        BitVector x = random_point(rng, n);
        MixResult r = fihc(p.black_box, x, rng);
        benchmark::DoNotOptimize(r.fitness);
        state.counters["evals"] += static_cast<double>(r.evaluations_used);
    }
}
BENCHMARK(bm_fihc)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
