#pragma once

// Walsh expansions of pseudo-boolean functions.
//
// A pseudo-boolean f : {0,1}^n -> R is represented as f(x) = sum_m w_m * phi_m(x)
// where m ranges over variable subsets (masks) and phi_m(x) = (-1)^{|{i in m : x_i = 1}|}.
// Masks are stored as ascending 0-based index lists; the empty mask is the
// constant term. Coefficients are doubles; a term with coefficient zero is
// never stored.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bits.hpp"

namespace graybox {

using Mask = std::vector<uint16_t>;  // ascending, 0-based

// Enumeration-based helpers are only allowed up to this size.
inline constexpr int kToyLimit = 20;

// Transforms drop coefficients with |w| < kPruneRel * max(1, max|w|).
inline constexpr double kPruneRel = 1e-12;

struct WalshTerm {
    Mask mask;
    double w = 0.0;
};

// Sign of mask m at point x: +1 if an even number of m's variables are 1.
inline int sign(const Mask& m, const BitVector& x) {
    int ones = 0;
    for (uint16_t i : m) ones ^= x.get(i) ? 1 : 0;
    return ones ? -1 : 1;
}

class WalshExpansion {
public:
    WalshExpansion() = default;
    WalshExpansion(int n, std::vector<WalshTerm> terms);

    int n() const { return n_; }
    const std::vector<WalshTerm>& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    double evaluate(const BitVector& x) const;

    // Expansion of this + other (merged coefficients, exact zeros dropped).
    WalshExpansion merged(const WalshExpansion& other) const;

    // Value table of size 2^n (index bit i-1 = variable i); n <= kToyLimit.
    std::vector<double> value_table() const;

    // All maximizers / minimizers, ascending by table index; n <= kToyLimit.
    // Ties are included exactly (bit-equal computed values).
    std::vector<BitVector> global_optima() const;
    std::vector<BitVector> global_minima() const;

    double max_abs_coefficient() const;

private:
    int n_ = 0;
    std::vector<WalshTerm> terms_;  // unique masks, canonical (size, lex) order
    // Flattened copy of the masks for cache-friendly evaluation.
    std::vector<uint32_t> offsets_;
    std::vector<uint16_t> flat_;
    std::vector<double> coef_;

    void freeze();
};

// Collects (mask, coefficient) pairs, merging duplicate masks by addition.
class WalshBuilder {
public:
    explicit WalshBuilder(int n) : n_(n) {}

    void add(Mask m, double w);
    void add_term(const WalshTerm& t) { add(t.mask, t.w); }

    // prune_rel > 0 drops |w| < prune_rel * max(1, max|w|); exact zeros are
    // always dropped.
    WalshExpansion build(double prune_rel = 0.0) const;

private:
    int n_;
    std::map<Mask, double> acc_;
};

// A k-bounded additive form: f(x) = sum_s table_s(x restricted to vars_s).
// Each subfunction's table is indexed by sum_j bit(vars[j]) << j.
struct Subfunction {
    std::vector<uint16_t> vars;  // 0-based, no duplicates
    std::vector<double> table;   // size 2^|vars|
};

struct AdditiveFunction {
    int n = 0;
    std::vector<Subfunction> subs;

    double evaluate(const BitVector& x) const {
        double s = 0.0;
        for (const auto& sub : subs) {
            uint32_t idx = 0;
            for (size_t j = 0; j < sub.vars.size(); ++j)
                idx |= static_cast<uint32_t>(x.get(sub.vars[j])) << j;
            s += sub.table[idx];
        }
        return s;
    }
};

// In-place Walsh-Hadamard butterfly: t <- H t where H[m][x] = phi_m(x).
// H is self-inverse up to the factor 2^n.
void walsh_hadamard(std::vector<double>& t);

// Exact expansion of an arbitrary black box by full enumeration; n <= kToyLimit.
WalshExpansion wht_full(const std::function<double(const BitVector&)>& f, int n);

// Exact expansion of an additive form via per-subfunction transforms of size
// 2^|vars_s|; no global enumeration, so n may be large as long as every
// subfunction is small.
WalshExpansion from_additive(const AdditiveFunction& f);

// --- text format -----------------------------------------------------------
//
// One term per line: ascending 1-based variable indices joined by commas, a
// colon, then the coefficient in scientific notation. The constant term uses
// the literal token "const". Blank lines and '#' comments are ignored; the
// writer records the dimension in a "# n=<n>" comment.
//
//   # n=8
//   const:5.00000000000000000e+00
//   1,3,7:-5.00000000000000000e-01

std::string write_walsh_text(const WalshExpansion& e);
WalshExpansion read_walsh_text(const std::string& text, int n = -1);

}  // namespace graybox
