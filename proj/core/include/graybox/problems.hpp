#pragma once

// Benchmark problem instances: every instance carries both a fast black-box
// evaluator and the matching Walsh expansion (gray-box structure), plus
// whatever optimum knowledge the family admits.
//
// Instance spec grammar (used by the CLI and tests):
//   onemax:n=10
//   dec:k=8,n=104,o=0          deceptive trap concatenation, overlap o
//   bim:k=6,n=204,o=4          bimodal symmetric trap concatenation
//   nk:n=72,k=6,seed=3         circular-adjacent NK landscape (arity k+1)
//   isg:L=16,seed=3            2D toroidal Ising spin glass, n = L^2
// optionally followed by one noise suffix:
//   +noise(c=5,seed=7[,gmin=1])    c random size-2 Walsh terms per variable
//   +snoise(nVol=1.2,seed=7)       per-solution additive noise (toy sizes)

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bits.hpp"
#include "walsh.hpp"

namespace graybox {

struct ProblemInstance {
    std::string name;  // canonical spec string
    int n = 0;
    WalshExpansion expansion;
    std::function<double(const BitVector&)> black_box;

    // Optimum of the *base* (noise-free) objective when known; for
    // per-solution noise the enumerated noised optimum. Success of a run is
    // always decided by is_optimal, never by comparing fitness to this value.
    std::optional<double> known_optimum;
    // Exact optimum set when enumerated (may be empty even if the optimum
    // value is known).
    std::vector<BitVector> optimum_set;
    // Null when no optimum knowledge exists (then runs cannot "succeed").
    std::function<bool(const BitVector&)> is_optimal;

    // Smallest nonzero fitness gap of the base objective, when known; needed
    // to scale order-preserving Walsh noise.
    std::optional<double> g_min;

    int noise_c = 0;         // size-2 Walsh noise terms per variable (0 = none)
    double noise_nvol = 0.0; // per-solution noise volume (0 = none)
};

enum class TrapKind { Dec, Bim };

ProblemInstance make_onemax(int n);

// Concatenation of trap blocks of size k. With overlap o > 0 consecutive
// blocks share o variables: block j covers positions j*(k-o) .. j*(k-o)+k-1
// (mod n), so there are n/(k-o) blocks and n must be divisible by k-o.
//
//   dec:  trap(u) = k if u = k, else k-1-u           (unique optimum all-ones)
//   bim:  f(u) = k/2 if u in {0,k}, else k/2-1-|u-k/2|  (k even; two optima
//         per block, all-zeros and all-ones globally)
ProblemInstance make_trap_concat(TrapKind kind, int k, int n, int o);

// Circular-adjacent NK landscape: variable i contributes a table over
// {i, i+1, ..., i+k mod n} (arity k+1) with values uniform in [0,1) drawn from
// a keyed PRF, so (n, k, seed) reproduces the instance exactly. The global
// optimum is computed by dynamic programming over the ring.
ProblemInstance make_nk(int n, int k, uint64_t seed);

// L x L toroidal +-1 Ising spin glass: fitness = sum over torus edges of
// J_ij * s_i * s_j with s = 2x - 1 (this is exactly a size-2 Walsh expansion).
// Each cell contributes its right and down edge, counted with multiplicity on
// tiny tori. Optima are enumerated for n <= 25, otherwise unknown.
ProblemInstance make_isg(int L, uint64_t seed);

// Adds c random size-2 Walsh noise terms per variable: partner drawn uniformly
// among the other variables, sign random, magnitude uniform in (eps/2, eps)
// with eps = g_min / (4 n c). The total per-solution perturbation is then
// below g_min/2, so every strict fitness relation of the base objective is
// preserved, and base-optimality remains the success criterion. g_min comes
// from the instance or the explicit argument (error if neither).
ProblemInstance add_walsh_noise(const ProblemInstance& base, int c, uint64_t seed,
                                std::optional<double> g_min_override = std::nullopt);

// Adds static per-solution noise eta(x) in (0, nVol), chosen once (a pure
// function of seed and x). The field is a random multilinear polynomial with
// mask sizes 1..5 and strongly size-decaying magnitudes, affinely rescaled
// into (0, nVol); a per-variable derivative cap keeps Hamming-neighbour noise
// differences below 0.8*nVol. Consequences, relied on by the analysis suite:
// unit-gap fitness orders are preserved for nVol <= 1.25 exactly, neighbour
// order flips become possible only for larger volumes, and the Walsh spectrum
// of the noise has size-2 magnitudes orders of magnitude above size-4 ones.
// Toy sizes only; the expansion is recomputed with wht_full and the noised
// optimum set is enumerated exactly.
ProblemInstance add_solution_noise(const ProblemInstance& base, double nvol, uint64_t seed);

// Parses the instance grammar above; throws std::invalid_argument on errors.
// When a generator or noise suffix omits its seed= key, auto_seed (if given)
// fills it in; the canonical instance name records the seed actually used.
ProblemInstance parse_problem_spec(const std::string& spec,
                                   std::optional<uint64_t> auto_seed = std::nullopt);

}  // namespace graybox
