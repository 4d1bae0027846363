#include "graybox/operators.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace graybox {

StructureCache build_structure_cache(const WalshExpansion& e, VigKind kind) {
    StructureCache c;
    switch (kind) {
        case VigKind::Px:
            c.boolean_vig = static_vig(e);
            break;
        case VigKind::WsVig:
            c.ws = ws_vig(e, true);
            break;
        case VigKind::WsVigNs:
            c.wsns = ws_vig(e, false);
            break;
        case VigKind::WdVig:
        case VigKind::WdVigNs:
            break;  // dynamic kinds need no precomputed graph
    }
    return c;
}

MixResult fihc(const FitnessFn& f, BitVector x, Rng& rng, const std::function<bool()>& stop) {
    const int n = x.size();
    double fx = f(x);
    MixResult r{std::move(x), fx, false, 1};
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    bool improved_pass = n > 0;
    while (improved_pass) {
        if (stop && stop()) break;
        improved_pass = false;
        rng.shuffle(order);
        for (int pos : order) {
            r.genotype.flip(pos);
            double ft = f(r.genotype);
            ++r.evaluations_used;
            if (ft > r.fitness) {
                r.fitness = ft;
                r.improved = true;
                improved_pass = true;
            } else {
                r.genotype.flip(pos);
            }
        }
    }
    return r;
}

std::vector<Mask> px_masks(const InteractionGraph& vig, const BitVector& x_a, const BitVector& x_b) {
    std::vector<int> d = x_a.diff_positions(x_b);
    const size_t m = d.size();
    // Union-find over the differing positions under the graph's edges.
    std::vector<size_t> parent(m);
    std::iota(parent.begin(), parent.end(), size_t{0});
    auto find = [&](size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            if (vig.edge(d[i], d[j])) parent[find(i)] = find(j);

    std::vector<Mask> comps(m);
    std::vector<int> comp_of(m, -1);
    int n_comps = 0;
    for (size_t i = 0; i < m; ++i) {
        size_t root = find(i);
        if (comp_of[root] < 0) comp_of[root] = n_comps++;
        comps[static_cast<size_t>(comp_of[root])].push_back(static_cast<uint16_t>(d[i]));
    }
    comps.resize(static_cast<size_t>(n_comps));
    // d is ascending, so each component's members are ascending and components
    // are already ordered by smallest member.
    return comps;
}

MixResult wpx(const WalshExpansion& e, const StructureCache& cache, const FitnessFn& f,
              const BitVector& source, double source_fitness, const BitVector& donor,
              const MixConfig& cfg, Rng& rng) {
    MixResult r{source, source_fitness, false, 0};
    std::vector<int> d = source.diff_positions(donor);
    if (d.empty()) return r;

    std::vector<Mask> masks;
    if (cfg.vig_kind == VigKind::Px) {
        masks = px_masks(cache.boolean_vig, source, donor);
        rng.shuffle(masks);
    } else {
        LinkageForest forest;
        switch (cfg.vig_kind) {
            case VigKind::WdVig:
                forest = build_forest(wd_vig(e, source, donor, true), d);
                break;
            case VigKind::WdVigNs:
                forest = build_forest(wd_vig(e, source, donor, false), d);
                break;
            case VigKind::WsVig:
                forest = build_forest(cache.ws, d);
                break;
            case VigKind::WsVigNs:
                forest = build_forest(cache.wsns, d);
                break;
            case VigKind::Px:
                break;
        }
        masks = cfg.strategy == MaskStrategy::LTtop ? masks_lttop(forest) : masks_lbot(forest, rng);
    }

    for (const Mask& mask : masks) {
        BitVector trial = source;
        for (uint16_t v : mask) trial.set(v, donor.get(v));
        double ft = f(trial);
        ++r.evaluations_used;
        if (ft > source_fitness) {
            r.genotype = std::move(trial);
            r.fitness = ft;
            r.improved = true;
            break;
        }
    }
    return r;
}

MixResult om_step(const FitnessFn& f, const BitVector& source, double source_fitness,
                  const std::vector<Mask>& masks, const std::vector<const BitVector*>& donor_pool,
                  Rng& rng) {
    if (donor_pool.empty()) throw std::invalid_argument("om_step: empty donor pool");
    MixResult r{source, source_fitness, false, 0};
    for (const Mask& mask : masks) {
        const BitVector& donor = *donor_pool[rng.below(donor_pool.size())];
        bool differs = false;
        for (uint16_t v : mask)
            if (r.genotype.get(v) != donor.get(v)) {
                differs = true;
                break;
            }
        if (!differs) continue;
        BitVector trial = r.genotype;
        for (uint16_t v : mask) trial.set(v, donor.get(v));
        double ft = f(trial);
        ++r.evaluations_used;
        if (ft >= r.fitness) {
            r.genotype = std::move(trial);
            r.fitness = ft;
        }
    }
    r.improved = r.fitness > source_fitness;
    return r;
}

}  // namespace graybox
