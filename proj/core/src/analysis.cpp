#include "graybox/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "spec_util.hpp"

namespace graybox {

using detail::fail;
using detail::require;

double analysis_epistasis(const WalshExpansion& e, const std::string& check) {
    if (check == "static") return epistasis(static_vig(e));
    auto f = [&e](const BitVector& x) { return e.evaluate(x); };
    if (check == "nonlinearity")
        return epistasis(exhaustive_dependency_vig(f, e.n(), DependencyCheck::NonLinearity));
    if (check == "nonmonotonicity")
        return epistasis(exhaustive_dependency_vig(f, e.n(), DependencyCheck::NonMonotonicity));
    if (check == "2dled") return epistasis(exhaustive_2dled(f, e.n()));
    fail("unknown analysis check '" + check + "'");
}

InteractionGraph analysis_vig(const WalshExpansion& e, const std::string& check) {
    if (check == "static") return static_vig(e);
    auto f = [&e](const BitVector& x) { return e.evaluate(x); };
    if (check == "nonlinearity")
        return exhaustive_dependency_vig(f, e.n(), DependencyCheck::NonLinearity);
    if (check == "nonmonotonicity")
        return exhaustive_dependency_vig(f, e.n(), DependencyCheck::NonMonotonicity);
    if (check == "2dled") return exhaustive_2dled(f, e.n()).symmetrized();
    fail("unknown analysis check '" + check + "'");
}

CliqueStats clique_stats(const InteractionGraph& g) {
    CliqueStats s;
    for (const auto& c : maximal_cliques(g)) {
        int size = static_cast<int>(c.size());
        if (s.clique_count == 0) {
            s.min_size = s.max_size = size;
        } else {
            s.min_size = std::min(s.min_size, size);
            s.max_size = std::max(s.max_size, size);
        }
        ++s.clique_count;
    }
    return s;
}

std::map<int, double> min_abs_coeff_by_mask_size(const WalshExpansion& e) {
    std::map<int, double> out;
    for (const WalshTerm& t : e.terms()) {
        int size = static_cast<int>(t.mask.size());
        if (size < 2) continue;
        double a = std::abs(t.w);
        auto [it, fresh] = out.emplace(size, a);
        if (!fresh && a < it->second) it->second = a;
    }
    return out;
}

namespace {

// Table indices of all maximizers; ties are bit-exact.
std::vector<uint32_t> argmax_set(const std::vector<double>& table) {
    std::vector<uint32_t> s;
    double best = -std::numeric_limits<double>::infinity();
    for (uint32_t i = 0; i < table.size(); ++i) {
        if (table[i] > best) {
            best = table[i];
            s.clear();
        }
        if (table[i] == best) s.push_back(i);
    }
    return s;
}

}  // namespace

DenoiseReport denoise(const WalshExpansion& e, const std::vector<std::string>& checks) {
    const int n = e.n();
    require(n >= 1 && n <= kToyLimit, "denoise: requires 1 <= n <= toy limit");
    for (const auto& c : checks)
        require(std::find(kAnalysisChecks.begin(), kAnalysisChecks.end(), c) !=
                    kAnalysisChecks.end(),
                "denoise: unknown check '" + c + "'");

    const auto& terms = e.terms();
    std::vector<uint32_t> bits(terms.size(), 0);
    for (size_t t = 0; t < terms.size(); ++t)
        for (uint16_t v : terms[t].mask) bits[t] |= uint32_t{1} << v;

    // Retained-coefficient array; every trial table is rebuilt by a fresh
    // butterfly so structurally tied values stay bit-identical. (An
    // incrementally updated table accumulates rounding that silently breaks
    // exact ties and then accepts removals that do change the optimum set —
    // e.g. deleting the last term touching a variable must tie the two
    // corresponding corners exactly.)
    std::vector<double> coef(size_t{1} << n, 0.0);
    for (size_t t = 0; t < terms.size(); ++t) coef[bits[t]] = terms[t].w;
    auto table_of = [](std::vector<double> c) {
        walsh_hadamard(c);
        return c;
    };
    const std::vector<uint32_t> target = argmax_set(table_of(coef));

    // Ascending |coefficient|; ties keep the canonical (size, lex) term order.
    std::vector<size_t> order(terms.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&terms](size_t a, size_t b) {
        return std::abs(terms[a].w) < std::abs(terms[b].w);
    });

    DenoiseReport rep;
    std::vector<char> removed(terms.size(), 0);
    for (size_t idx : order) {
        const double w = terms[idx].w;
        coef[bits[idx]] = 0.0;
        if (argmax_set(table_of(coef)) != target) {
            coef[bits[idx]] = w;  // rejected: retained, and the walk stops
            break;
        }
        removed[idx] = 1;
        ++rep.removed_terms;
    }

    std::vector<WalshTerm> kept;
    kept.reserve(terms.size() - static_cast<size_t>(rep.removed_terms));
    for (size_t t = 0; t < terms.size(); ++t)
        if (!removed[t]) kept.push_back(terms[t]);
    rep.surrogate = WalshExpansion(n, std::move(kept));
    rep.retained_terms = static_cast<int>(rep.surrogate.term_count());

    auto indices = [](const std::vector<BitVector>& xs) {
        std::vector<uint32_t> v;
        v.reserve(xs.size());
        for (const BitVector& x : xs) v.push_back(x.table_index());
        return v;
    };
    rep.optima_preserved = indices(rep.surrogate.global_optima()) == indices(e.global_optima());
    if (!rep.optima_preserved)
        throw std::logic_error("denoise: global optimum set changed on the rebuilt surrogate");

    for (const auto& c : checks)
        rep.epistasis[c] = {analysis_epistasis(e, c), analysis_epistasis(rep.surrogate, c)};
    return rep;
}

std::vector<BitVector> cross_section_path(const BitVector& o, const BitVector& m, Rng& rng) {
    require(o.size() == m.size() && o.size() >= 1,
            "cross_section_path: mismatched or empty points");
    std::vector<BitVector> path;
    BitVector cur = o.complemented();
    path.push_back(cur);
    for (const BitVector* tgt : {&m, &o}) {
        std::vector<int> d = cur.diff_positions(*tgt);
        rng.shuffle(d);
        for (int v : d) {
            cur.flip(v);
            path.push_back(cur);
        }
    }
    return path;
}

std::vector<double> landscape_cross_section(const std::function<double(const BitVector&)>& f,
                                            const std::vector<BitVector>& optima,
                                            const std::vector<BitVector>& minima, Rng& rng) {
    require(!optima.empty() && !minima.empty(),
            "landscape_cross_section: needs at least one optimum and one minimum");
    const BitVector& o = optima[rng.below(optima.size())];
    const BitVector& m = minima[rng.below(minima.size())];
    std::vector<double> series;
    for (const BitVector& x : cross_section_path(o, m, rng)) series.push_back(f(x));
    return series;
}

}  // namespace graybox
