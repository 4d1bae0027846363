#pragma once

// Toy-scale landscape analysis: optimum-preserving surrogate denoising,
// per-check epistasis and clique statistics, spectral extremes, and fitness
// cross-sections between global extremes.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bits.hpp"
#include "rng.hpp"
#include "structure.hpp"
#include "walsh.hpp"

namespace graybox {

// Check names accepted by analysis_epistasis / analysis_vig: "static" reads
// the stored masks, the others scan every variable pair over every context.
inline const std::vector<std::string> kAnalysisChecks = {"static", "nonlinearity",
                                                         "nonmonotonicity", "2dled"};

// Fraction of related variable pairs under one named check ("2dled" counts
// ordered pairs). Empirical checks require n <= kToyLimit.
double analysis_epistasis(const WalshExpansion& e, const std::string& check);

// Boolean relation graph of one named check; "2dled" is OR-symmetrized so the
// result is always undirected.
InteractionGraph analysis_vig(const WalshExpansion& e, const std::string& check);

struct CliqueStats {
    int clique_count = 0;
    int min_size = 0;
    int max_size = 0;
};

// Maximal-clique statistics (isolated vertices count as singleton cliques).
CliqueStats clique_stats(const InteractionGraph& g);

// Smallest |coefficient| among stored masks of each size >= 2; sizes with no
// stored mask are absent (a purely linear expansion yields an empty map).
std::map<int, double> min_abs_coeff_by_mask_size(const WalshExpansion& e);

struct DenoiseReport {
    WalshExpansion surrogate;
    int removed_terms = 0;
    int retained_terms = 0;
    // Re-verified on the rebuilt surrogate: global_optima(surrogate) equals
    // global_optima(original). True by construction up to floating-point
    // associativity across exact ties.
    bool optima_preserved = false;
    // check -> (original, surrogate) epistasis for each requested check.
    std::map<std::string, std::pair<double, double>> epistasis;
};

// Optimum-preserving surrogate: visits the terms in ascending |coefficient|
// order, tentatively deletes the current term, and commits the deletion only
// when the set of global maximizers is exactly unchanged. The walk stops at
// the first rejected deletion; every term from there on is retained verbatim
// (retained terms keep their original coefficients). n <= kToyLimit.
DenoiseReport denoise(const WalshExpansion& e, const std::vector<std::string>& checks = {});

// Path complement(o) -> m -> o: starts at the complement of o, then flips the
// genes differing from each successive target one at a time in a random order.
// Length is 1 + hamming(~o, m) + hamming(m, o).
std::vector<BitVector> cross_section_path(const BitVector& o, const BitVector& m, Rng& rng);

// Fitness along cross_section_path for o, m drawn uniformly from the given
// global optima / minima (both must be non-empty); entry 0 is the start point,
// then one entry per flip.
std::vector<double> landscape_cross_section(const std::function<double(const BitVector&)>& f,
                                            const std::vector<BitVector>& optima,
                                            const std::vector<BitVector>& minima, Rng& rng);

}  // namespace graybox
