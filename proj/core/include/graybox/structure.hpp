#pragma once

// Variable-interaction structure: weighted and boolean interaction graphs
// derived from Walsh expansions, empirical dependency checks on black boxes,
// epistasis measures, and maximal cliques.

#include <functional>
#include <string>
#include <vector>

#include "bits.hpp"
#include "walsh.hpp"

namespace graybox {

// Equality tolerance for empirical dependency checks (absolute).
inline constexpr double kDepTol = 1e-9;

enum class GraphKind { Boolean, Weighted, Directed };

// Symmetric non-negative interaction graph over variables 1..n.
class InteractionGraph {
public:
    InteractionGraph() = default;
    explicit InteractionGraph(int n, GraphKind kind = GraphKind::Weighted)
        : n_(n), kind_(kind), w_(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0) {}

    int n() const { return n_; }
    GraphKind kind() const { return kind_; }

    double at(int g, int h) const { return w_[static_cast<size_t>(g) * n_ + h]; }

    void add(int g, int h, double v) {
        if (g == h) throw std::invalid_argument("InteractionGraph: no self-loops");
        if (v < 0.0) throw std::invalid_argument("InteractionGraph: negative weight");
        w_[static_cast<size_t>(g) * n_ + h] += v;
        w_[static_cast<size_t>(h) * n_ + g] += v;
    }

    void set(int g, int h, double v) {
        if (g == h) throw std::invalid_argument("InteractionGraph: no self-loops");
        if (v < 0.0) throw std::invalid_argument("InteractionGraph: negative weight");
        w_[static_cast<size_t>(g) * n_ + h] = v;
        w_[static_cast<size_t>(h) * n_ + g] = v;
    }

    bool edge(int g, int h) const { return at(g, h) > 0.0; }

    int edge_count() const {
        int c = 0;
        for (int g = 0; g < n_; ++g)
            for (int h = g + 1; h < n_; ++h)
                if (edge(g, h)) ++c;
        return c;
    }

private:
    int n_ = 0;
    GraphKind kind_ = GraphKind::Weighted;
    std::vector<double> w_;
};

// Directed dependency graph: dep(g,h) == "x_g depends on x_h".
class DirectedDependencyGraph {
public:
    DirectedDependencyGraph() = default;
    explicit DirectedDependencyGraph(int n)
        : n_(n), dep_(static_cast<size_t>(n) * static_cast<size_t>(n), 0) {}

    int n() const { return n_; }
    bool at(int g, int h) const { return dep_[static_cast<size_t>(g) * n_ + h] != 0; }
    void mark(int g, int h) {
        if (g == h) throw std::invalid_argument("DirectedDependencyGraph: no self-loops");
        dep_[static_cast<size_t>(g) * n_ + h] = 1;
    }

    int edge_count() const {
        int c = 0;
        for (char b : dep_) c += b != 0;
        return c;
    }

    // OR-symmetrization: pair (g,h) related iff either direction is marked.
    InteractionGraph symmetrized() const {
        InteractionGraph s(n_, GraphKind::Boolean);
        for (int g = 0; g < n_; ++g)
            for (int h = g + 1; h < n_; ++h)
                if (at(g, h) || at(h, g)) s.set(g, h, 1.0);
        return s;
    }

private:
    int n_ = 0;
    std::vector<char> dep_;
};

// --- graphs from expansions --------------------------------------------------

// Boolean structural graph: (g,h) related iff some stored mask contains both.
InteractionGraph static_vig(const WalshExpansion& e);

// Static weighted graphs over all masks containing both endpoints:
// size_weighted true  -> sum |w| * 2/(s(s-1)) with s = |mask|      (wsVIG)
// size_weighted false -> sum |w|                                   (wsVIGns)
InteractionGraph ws_vig(const WalshExpansion& e, bool size_weighted);

// Dynamic weighted graphs between two individuals: only masks whose endpoints
// g,h both lie in the differing set D = diff(x_a,x_b) contribute:
// size_weighted true  -> sum |w| * 2/(d(d-1)) with d = |mask ∩ D|  (wdVIG)
// size_weighted false -> sum |w|                                   (wdVIGns)
InteractionGraph wd_vig(const WalshExpansion& e, const BitVector& x_a, const BitVector& x_b,
                        bool size_weighted);

// --- empirical dependency checks ---------------------------------------------
//
// A "context" fixes all variables other than g,h; the quadruple
// (f(x), f(x^g), f(x^h), f(x^{g,h})) is examined with x_g = x_h = 0. The
// condition sets below are closed under re-basing the quadruple at any of its
// four corners, so scanning one corner per context is exhaustive.

// Non-linearity: f(x) + f(x^{g,h}) != f(x^g) + f(x^h).
bool check_nonlinearity(const std::function<double(const BitVector&)>& f, const BitVector& x, int g,
                        int h);

// Non-monotonicity: any of C1..C6 (see check_2dled for the directional split).
bool check_nonmonotonicity(const std::function<double(const BitVector&)>& f, const BitVector& x,
                           int g, int h);

// Directional split: first = x_g depends on x_h (C1..C3),
//                    second = x_h depends on x_g (C4..C6), where
//   C1: f(x) < f(x^g) and f(x^h) >= f(x^{g,h})
//   C2: f(x) = f(x^g) and f(x^h) !=  f(x^{g,h})
//   C3: f(x) > f(x^g) and f(x^h) <= f(x^{g,h})
//   C4..C6: the same with g and h exchanged.
std::pair<bool, bool> check_2dled(const std::function<double(const BitVector&)>& f,
                                  const BitVector& x, int g, int h);

enum class DependencyCheck { NonLinearity, NonMonotonicity };

// Runs a check for every pair over every context (2^(n-2) per pair),
// short-circuiting a pair once it fires; n <= kToyLimit.
InteractionGraph exhaustive_dependency_vig(const std::function<double(const BitVector&)>& f, int n,
                                           DependencyCheck check);

// Directional variant over the same exhaustive context set.
DirectedDependencyGraph exhaustive_2dled(const std::function<double(const BitVector&)>& f, int n);

// --- measures ----------------------------------------------------------------

// Fraction of related pairs: symmetric graphs divide by n(n-1)/2, directed
// graphs by n(n-1).
double epistasis(const InteractionGraph& g);
double epistasis(const DirectedDependencyGraph& g);

// All maximal cliques (Bron–Kerbosch with pivoting) of the positive-weight
// edge set; isolated vertices yield singleton cliques. Each clique is an
// ascending 0-based index list; the list of cliques is sorted.
std::vector<std::vector<int>> maximal_cliques(const InteractionGraph& g);

// --- dump format ---------------------------------------------------------------
//
// Header "n=<n> kind=<boolean|weighted|directed>", then one line per nonzero
// entry "g h value" with 1-based g,h; symmetric graphs list g < h only.

std::string graph_dump(const InteractionGraph& g);
std::string graph_dump(const DirectedDependencyGraph& g);

}  // namespace graybox
