#pragma once

// Full optimizers with exact evaluation accounting: the pyramid optimizer
// whose mixing operator is weighted partition crossover, and two
// optimal-mixing baselines driven by a single static linkage forest.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bits.hpp"
#include "operators.hpp"
#include "problems.hpp"
#include "rng.hpp"

namespace graybox {

struct Budget {
    uint64_t max_ffe = 2'000'000;
    // Optional extra stop: halt once the incumbent reaches this fitness.
    // Success is still decided by the instance's optimality predicate.
    std::optional<double> target_fitness;
};

struct RunResult {
    BitVector best_genotype;
    double best_fitness = 0.0;
    uint64_t ffe_used = 0;
    uint64_t ffe_to_best = 0;
    std::optional<uint64_t> ffe_to_optimum;  // present iff success
    bool success = false;
    std::vector<std::pair<uint64_t, double>> trajectory;  // improvements (ffe, fitness)
};

// Counts every evaluation, tracks the incumbent, and detects optimality.
//
// The optimality predicate is only consulted when the incumbent strictly
// improves. That is exhaustive: on every instance the predicate accepts only
// maximizers of the evaluated objective (for order-preserving noise, the base
// optima are exactly the noised maximizers' closure), so the first evaluation
// of an optimal solution either strictly improves the incumbent or ties a
// previous evaluation that was itself optimal and already detected.
class Evaluator {
public:
    Evaluator(const ProblemInstance& p, const Budget& budget, bool record_trajectory = false)
        : p_(&p), budget_(budget), record_(record_trajectory), best_genotype_(p.n) {}

    double operator()(const BitVector& x) {
        ++ffe_;
        double v = p_->black_box(x);
        if (first_ || v > best_fitness_) {
            first_ = false;
            best_fitness_ = v;
            best_genotype_ = x;
            ffe_to_best_ = ffe_;
            if (record_) trajectory_.push_back({ffe_, v});
            if (!opt_ffe_ && p_->is_optimal && p_->is_optimal(x)) opt_ffe_ = ffe_;
            if (budget_.target_fitness && v >= *budget_.target_fitness) target_hit_ = true;
        }
        return v;
    }

    uint64_t ffe() const { return ffe_; }
    bool optimum_found() const { return opt_ffe_.has_value(); }
    bool should_stop() const { return ffe_ >= budget_.max_ffe || opt_ffe_.has_value() || target_hit_; }

    RunResult result() const {
        RunResult r;
        r.best_genotype = best_genotype_;
        r.best_fitness = best_fitness_;
        r.ffe_used = ffe_;
        r.ffe_to_best = ffe_to_best_;
        r.ffe_to_optimum = opt_ffe_;
        r.success = opt_ffe_.has_value();
        r.trajectory = trajectory_;
        return r;
    }

private:
    const ProblemInstance* p_;
    Budget budget_;
    bool record_;
    bool first_ = true;
    bool target_hit_ = false;
    uint64_t ffe_ = 0;
    double best_fitness_ = 0.0;
    BitVector best_genotype_;
    uint64_t ffe_to_best_ = 0;
    std::optional<uint64_t> opt_ffe_;
    std::vector<std::pair<uint64_t, double>> trajectory_;
};

// Stack of duplicate-free populations with contiguous level indices.
class Pyramid {
public:
    struct Member {
        BitVector genotype;
        double fitness;
    };

    size_t level_count() const { return levels_.size(); }
    const std::vector<Member>& level(size_t i) const { return levels_[i]; }

    // level == level_count() appends a new level; returns false (and stores
    // nothing) when the genotype already exists at that level.
    bool insert(size_t level, const BitVector& x, double fitness);

private:
    std::vector<std::vector<Member>> levels_;
    std::vector<std::unordered_set<BitVector, BitVectorHash>> seen_;
};

// Pyramid optimizer: each iteration hill-climbs a fresh random solution, adds
// it to level 0, then sweeps it across all levels (in a fresh random donor
// order per level) with weighted partition crossover; when a level's sweep
// strictly improved the climber, a copy is promoted to the next level.
RunResult run_gbophe(const ProblemInstance& p, const MixConfig& cfg, const Budget& budget,
                     Rng& rng, bool record_trajectory = false);

// Pyramid baseline: same population flow, but each level applies one optimal
// mixing pass (bottom-up masks of a single static unit-weight forest,
// reshuffled every pass) with the level as donor pool.
RunResult run_p3(const ProblemInstance& p, const Budget& budget, Rng& rng,
                 bool record_trajectory = false);

// Interleaved multistart optimal mixing baseline: populations of size 2, 4,
// 8, ... where each population runs one generation per four generations of its
// predecessor; a generation applies one optimal mixing pass to every
// individual with the whole population as donor pool. A population stops when
// it converges or some larger population's best matches or beats its best.
RunResult run_ltgomea(const ProblemInstance& p, const Budget& budget, Rng& rng,
                      bool record_trajectory = false);

// Optimizer spec strings:
//   gbophe:vig=<wdvig|wdvigns|wsvig|wsvigns>,strategy=<lttop|lbot>
//   gbophe:vig=px
//   p3
//   ltgomea
struct OptimizerConfig {
    enum class Algo { Gbophe, P3, LtGomea };
    Algo algo = Algo::Gbophe;
    MixConfig mix;
    std::string canonical;  // normalized spec string
};

OptimizerConfig parse_optimizer_spec(const std::string& spec);

RunResult run_optimizer(const ProblemInstance& p, const OptimizerConfig& cfg, const Budget& budget,
                        Rng& rng, bool record_trajectory = false);

}  // namespace graybox
