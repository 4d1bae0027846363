#pragma once

// Variation operators: first-improvement hill climbing, partition-crossover
// mask derivation, weighted partition crossover, and optimal mixing.
//
// All operators evaluate fitness only through the FitnessFn they are given, so
// callers can meter evaluations. Acceptance rules are deliberately different:
// wpx commits only strict improvements (and stops at the first one), om_step
// keeps any non-decrease and tries every mask exactly once.

#include <cstdint>
#include <functional>
#include <vector>

#include "bits.hpp"
#include "linkage.hpp"
#include "rng.hpp"
#include "structure.hpp"
#include "walsh.hpp"

namespace graybox {

using FitnessFn = std::function<double(const BitVector&)>;

struct MixResult {
    BitVector genotype;
    double fitness = 0.0;
    bool improved = false;           // fitness strictly above the input's
    uint64_t evaluations_used = 0;
};

// Weighting used to build the crossover's interaction graph. The Wd kinds are
// dynamic (recomputed from each source/donor pair, masks weighted within the
// differing set), the Ws kinds are static per expansion; Px ignores weights
// and uses connected components of the boolean graph restricted to the
// differing set, in random order.
enum class VigKind { WdVig, WdVigNs, WsVig, WsVigNs, Px };

// Which forest nodes become crossover masks: tree tops or all nodes bottom-up.
enum class MaskStrategy { LTtop, LBot };

struct MixConfig {
    VigKind vig_kind = VigKind::WdVig;
    MaskStrategy strategy = MaskStrategy::LTtop;
};

// Static structure reused across wpx calls on one expansion; build once per
// optimizer run. Only the members the configured VigKind reads are populated.
struct StructureCache {
    InteractionGraph boolean_vig;  // Px
    InteractionGraph ws;           // WsVig (size-weighted sums)
    InteractionGraph wsns;         // WsVigNs (plain sums)
};
StructureCache build_structure_cache(const WalshExpansion& e, VigKind kind);

// First-improvement hill climber: evaluates x (1 evaluation), then repeats
// passes over a fresh random permutation of all positions, keeping each
// strictly improving flip, until a full pass brings no improvement. `stop` is
// polled between passes, so the overshoot past an external budget is at most
// one pass (n evaluations).
MixResult fihc(const FitnessFn& f, BitVector x, Rng& rng, const std::function<bool()>& stop = {});

// Connected components of `vig` restricted to the positions where the parents
// differ; isolated differing positions yield singleton masks. Components are
// returned with ascending members, ordered by smallest member.
std::vector<Mask> px_masks(const InteractionGraph& vig, const BitVector& x_a, const BitVector& x_b);

// Weighted partition crossover. Builds the configured interaction graph over
// the differing set D (empty D: immediate no-op), clusters it into a linkage
// forest, derives masks per the strategy, and tries each mask once against the
// unmodified source: the trial copies the donor's genes at the mask and costs
// one evaluation; the first strictly improving trial is returned and the
// operator stops. `source_fitness` must equal f(source).
MixResult wpx(const WalshExpansion& e, const StructureCache& cache, const FitnessFn& f,
              const BitVector& source, double source_fitness, const BitVector& donor,
              const MixConfig& cfg, Rng& rng);

// Optimal mixing: for each mask in order, copy the masked genes from a
// uniform-random donor; keep the result when fitness does not decrease, revert
// otherwise. Trials identical to the current genotype are skipped without
// evaluation. `source_fitness` must equal f(source); donor_pool must be
// nonempty.
MixResult om_step(const FitnessFn& f, const BitVector& source, double source_fitness,
                  const std::vector<Mask>& masks, const std::vector<const BitVector*>& donor_pool,
                  Rng& rng);

}  // namespace graybox
