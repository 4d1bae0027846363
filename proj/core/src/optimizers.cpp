#include "graybox/optimizers.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "spec_util.hpp"

namespace graybox {

namespace {

BitVector random_bitvector(int n, Rng& rng) {
    BitVector x(n);
    for (int i = 0; i < n; ++i)
        if (rng.coin()) x.set(i, true);
    return x;
}

void check_run_pre(const ProblemInstance& p, const Budget& budget) {
    if (p.n <= 0 || p.expansion.n() != p.n)
        throw std::invalid_argument("optimizer: instance has no usable expansion");
    if (budget.max_ffe == 0) throw std::invalid_argument("optimizer: max_ffe must be positive");
}

// Unit-weight graph over the static structural edges; the baselines' single
// static forest is built from this once per run.
InteractionGraph unit_static_vig(const WalshExpansion& e) {
    InteractionGraph b = static_vig(e);
    InteractionGraph unit(b.n());
    for (int g = 0; g < b.n(); ++g)
        for (int h = g + 1; h < b.n(); ++h)
            if (b.edge(g, h)) unit.set(g, h, 1.0);
    return unit;
}

}  // namespace

bool Pyramid::insert(size_t level, const BitVector& x, double fitness) {
    if (level > levels_.size()) throw std::logic_error("Pyramid: level indices must be contiguous");
    if (level == levels_.size()) {
        levels_.emplace_back();
        seen_.emplace_back();
    }
    if (!seen_[level].insert(x).second) return false;
    levels_[level].push_back({x, fitness});
    return true;
}

RunResult run_gbophe(const ProblemInstance& p, const MixConfig& cfg, const Budget& budget,
                     Rng& rng, bool record_trajectory) {
    check_run_pre(p, budget);
    Evaluator ev(p, budget, record_trajectory);
    FitnessFn f = [&ev](const BitVector& x) { return ev(x); };
    std::function<bool()> stop = [&ev]() { return ev.should_stop(); };
    const StructureCache cache = build_structure_cache(p.expansion, cfg.vig_kind);
    Pyramid pyr;

    while (!ev.should_stop()) {
        MixResult hc = fihc(f, random_bitvector(p.n, rng), rng, stop);
        BitVector x = std::move(hc.genotype);
        double fx = hc.fitness;
        pyr.insert(0, x, fx);
        // The level bound is re-read every iteration: a promotion that creates
        // a new level extends the climber's sweep to it.
        for (size_t lvl = 0; lvl < pyr.level_count(); ++lvl) {
            if (ev.should_stop()) break;
            const double snapshot = fx;
            const auto& members = pyr.level(lvl);
            std::vector<size_t> order(members.size());
            std::iota(order.begin(), order.end(), size_t{0});
            rng.shuffle(order);
            for (size_t idx : order) {
                if (ev.should_stop()) break;
                MixResult mr = wpx(p.expansion, cache, f, x, fx, members[idx].genotype, cfg, rng);
                if (mr.improved) {
                    x = std::move(mr.genotype);
                    fx = mr.fitness;
                }
            }
            if (ev.should_stop()) break;
            if (fx > snapshot) pyr.insert(lvl + 1, x, fx);
        }
    }
    return ev.result();
}

RunResult run_p3(const ProblemInstance& p, const Budget& budget, Rng& rng,
                 bool record_trajectory) {
    check_run_pre(p, budget);
    Evaluator ev(p, budget, record_trajectory);
    FitnessFn f = [&ev](const BitVector& x) { return ev(x); };
    std::function<bool()> stop = [&ev]() { return ev.should_stop(); };
    const LinkageForest forest = build_forest(unit_static_vig(p.expansion));
    Pyramid pyr;

    while (!ev.should_stop()) {
        MixResult hc = fihc(f, random_bitvector(p.n, rng), rng, stop);
        BitVector x = std::move(hc.genotype);
        double fx = hc.fitness;
        pyr.insert(0, x, fx);
        for (size_t lvl = 0; lvl < pyr.level_count(); ++lvl) {
            if (ev.should_stop()) break;
            const double snapshot = fx;
            const std::vector<Mask> masks = masks_lbot(forest, rng);
            const auto& members = pyr.level(lvl);
            std::vector<const BitVector*> pool;
            pool.reserve(members.size());
            for (const auto& m : members) pool.push_back(&m.genotype);
            MixResult mr = om_step(f, x, fx, masks, pool, rng);
            x = std::move(mr.genotype);
            fx = mr.fitness;
            if (ev.should_stop()) break;
            if (fx > snapshot) pyr.insert(lvl + 1, x, fx);
        }
    }
    return ev.result();
}

RunResult run_ltgomea(const ProblemInstance& p, const Budget& budget, Rng& rng,
                      bool record_trajectory) {
    check_run_pre(p, budget);
    Evaluator ev(p, budget, record_trajectory);
    FitnessFn f = [&ev](const BitVector& x) { return ev(x); };
    const LinkageForest forest = build_forest(unit_static_vig(p.expansion));

    struct Pop {
        std::vector<BitVector> xs;
        std::vector<double> fs;
        bool terminated = false;
        uint64_t generations = 0;
    };
    std::vector<Pop> pops;

    auto pop_best = [](const Pop& pop) {
        double b = pop.fs.empty() ? 0.0 : pop.fs[0];
        for (double v : pop.fs) b = std::max(b, v);
        return b;
    };
    auto converged = [](const Pop& pop) {
        for (const auto& x : pop.xs)
            if (x != pop.xs.front()) return false;
        return true;
    };
    auto create_pop = [&](size_t i) {
        Pop pop;
        const size_t size = size_t{2} << i;
        for (size_t j = 0; j < size && !ev.should_stop(); ++j) {
            BitVector x = random_bitvector(p.n, rng);
            pop.fs.push_back(f(x));
            pop.xs.push_back(std::move(x));
        }
        pops.push_back(std::move(pop));
    };
    auto do_generation = [&](Pop& pop) {
        for (size_t j = 0; j < pop.xs.size(); ++j) {
            if (ev.should_stop()) return;
            const std::vector<Mask> masks = masks_lbot(forest, rng);
            std::vector<const BitVector*> pool;
            pool.reserve(pop.xs.size());
            for (const auto& x : pop.xs) pool.push_back(&x);
            MixResult mr = om_step(f, pop.xs[j], pop.fs[j], masks, pool, rng);
            pop.xs[j] = std::move(mr.genotype);
            pop.fs[j] = mr.fitness;
        }
    };
    auto update_terminations = [&]() {
        for (size_t i = 0; i < pops.size(); ++i) {
            if (pops[i].terminated || pops[i].xs.empty()) continue;
            if (converged(pops[i])) {
                pops[i].terminated = true;
                continue;
            }
            for (size_t j = i + 1; j < pops.size(); ++j) {
                if (!pops[j].xs.empty() && pop_best(pops[j]) >= pop_best(pops[i])) {
                    pops[i].terminated = true;
                    break;
                }
            }
        }
    };

    // One generation of population i; every fourth generation cascades one
    // generation to the next-larger population, creating it on first touch.
    std::function<void(size_t)> tick = [&](size_t i) {
        if (ev.should_stop()) return;
        if (i == pops.size()) create_pop(i);
        Pop& pop = pops[i];
        if (!pop.terminated && !pop.xs.empty()) {
            do_generation(pop);
            update_terminations();
        }
        ++pop.generations;
        if (pop.generations % 4 == 0) tick(i + 1);
    };

    while (!ev.should_stop()) tick(0);
    return ev.result();
}

OptimizerConfig parse_optimizer_spec(const std::string& spec) {
    using namespace detail;
    const size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    OptimizerConfig cfg;
    if (name == "p3" || name == "ltgomea") {
        require(colon == std::string::npos, name + ": takes no parameters");
        cfg.algo = name == "p3" ? OptimizerConfig::Algo::P3 : OptimizerConfig::Algo::LtGomea;
        cfg.canonical = name;
        return cfg;
    }
    require(name == "gbophe", "optimizer spec '" + spec + "': unknown optimizer '" + name + "'");
    cfg.algo = OptimizerConfig::Algo::Gbophe;
    KvMap kv = parse_kv(colon == std::string::npos ? "" : spec.substr(colon + 1), "gbophe");
    const std::string vig = take(kv, "vig", "gbophe");
    if (vig == "px") {
        cfg.mix.vig_kind = VigKind::Px;
        expect_empty(kv, "gbophe");
        cfg.canonical = "gbophe:vig=px";
        return cfg;
    }
    if (vig == "wdvig") {
        cfg.mix.vig_kind = VigKind::WdVig;
    } else if (vig == "wdvigns") {
        cfg.mix.vig_kind = VigKind::WdVigNs;
    } else if (vig == "wsvig") {
        cfg.mix.vig_kind = VigKind::WsVig;
    } else if (vig == "wsvigns") {
        cfg.mix.vig_kind = VigKind::WsVigNs;
    } else {
        fail("gbophe: unknown vig '" + vig + "'");
    }
    const std::string strategy = take(kv, "strategy", "gbophe");
    if (strategy == "lttop") {
        cfg.mix.strategy = MaskStrategy::LTtop;
    } else if (strategy == "lbot") {
        cfg.mix.strategy = MaskStrategy::LBot;
    } else {
        fail("gbophe: unknown strategy '" + strategy + "'");
    }
    expect_empty(kv, "gbophe");
    cfg.canonical = "gbophe:vig=" + vig + ",strategy=" + strategy;
    return cfg;
}

RunResult run_optimizer(const ProblemInstance& p, const OptimizerConfig& cfg, const Budget& budget,
                        Rng& rng, bool record_trajectory) {
    switch (cfg.algo) {
        case OptimizerConfig::Algo::Gbophe:
            return run_gbophe(p, cfg.mix, budget, rng, record_trajectory);
        case OptimizerConfig::Algo::P3:
            return run_p3(p, budget, rng, record_trajectory);
        case OptimizerConfig::Algo::LtGomea:
            return run_ltgomea(p, budget, rng, record_trajectory);
    }
    throw std::logic_error("run_optimizer: unreachable");
}

}  // namespace graybox
