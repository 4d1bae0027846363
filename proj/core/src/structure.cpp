#include "graybox/structure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace graybox {

namespace {

// Tolerant three-way comparison: returns -1, 0, +1 for <, =, > with kDepTol.
int cmp(double a, double b) {
    double d = a - b;
    if (d > kDepTol) return 1;
    if (d < -kDepTol) return -1;
    return 0;
}

void add_pair_weights(InteractionGraph& g, const std::vector<uint16_t>& vars, double contribution) {
    for (size_t i = 0; i < vars.size(); ++i)
        for (size_t j = i + 1; j < vars.size(); ++j) g.add(vars[i], vars[j], contribution);
}

}  // namespace

InteractionGraph static_vig(const WalshExpansion& e) {
    InteractionGraph g(e.n(), GraphKind::Boolean);
    for (const auto& t : e.terms())
        for (size_t i = 0; i < t.mask.size(); ++i)
            for (size_t j = i + 1; j < t.mask.size(); ++j) g.set(t.mask[i], t.mask[j], 1.0);
    return g;
}

InteractionGraph ws_vig(const WalshExpansion& e, bool size_weighted) {
    InteractionGraph g(e.n(), GraphKind::Weighted);
    for (const auto& t : e.terms()) {
        size_t s = t.mask.size();
        if (s < 2) continue;
        double c = std::fabs(t.w);
        if (size_weighted) c *= 2.0 / (static_cast<double>(s) * static_cast<double>(s - 1));
        add_pair_weights(g, t.mask, c);
    }
    return g;
}

InteractionGraph wd_vig(const WalshExpansion& e, const BitVector& x_a, const BitVector& x_b,
                        bool size_weighted) {
    if (x_a.size() != e.n() || x_b.size() != e.n())
        throw std::invalid_argument("wd_vig: individual size mismatch");
    std::vector<char> differs(static_cast<size_t>(e.n()), 0);
    for (int p : x_a.diff_positions(x_b)) differs[static_cast<size_t>(p)] = 1;

    InteractionGraph g(e.n(), GraphKind::Weighted);
    std::vector<uint16_t> dm;
    for (const auto& t : e.terms()) {
        dm.clear();
        for (uint16_t i : t.mask)
            if (differs[i]) dm.push_back(i);
        size_t d = dm.size();
        if (d < 2) continue;
        double c = std::fabs(t.w);
        if (size_weighted) c *= 2.0 / (static_cast<double>(d) * static_cast<double>(d - 1));
        add_pair_weights(g, dm, c);
    }
    return g;
}

bool check_nonlinearity(const std::function<double(const BitVector&)>& f, const BitVector& x, int g,
                        int h) {
    BitVector xg = x, xh = x, xgh = x;
    xg.flip(g);
    xh.flip(h);
    xgh.flip(g);
    xgh.flip(h);
    return cmp(f(x) + f(xgh), f(xg) + f(xh)) != 0;
}

namespace {

// C1..C3 of the quadruple (a, b, c, d) = (f(x), f(x^g), f(x^h), f(x^{g,h})):
// does x_g depend on x_h?
bool g_depends(double a, double b, double c, double d) {
    int ab = cmp(a, b), cd = cmp(c, d);
    if (ab < 0) return cd >= 0;  // C1
    if (ab == 0) return cd != 0; // C2
    return cd <= 0;              // C3
}

}  // namespace

bool check_nonmonotonicity(const std::function<double(const BitVector&)>& f, const BitVector& x,
                           int g, int h) {
    auto [gh, hg] = check_2dled(f, x, g, h);
    return gh || hg;
}

std::pair<bool, bool> check_2dled(const std::function<double(const BitVector&)>& f,
                                  const BitVector& x, int g, int h) {
    BitVector xg = x, xh = x, xgh = x;
    xg.flip(g);
    xh.flip(h);
    xgh.flip(g);
    xgh.flip(h);
    double a = f(x), b = f(xg), c = f(xh), d = f(xgh);
    return {g_depends(a, b, c, d), g_depends(a, c, b, d)};
}

namespace {

// Enumerates, for a pair (g, h) with g < h, the table index of every context
// with x_g = x_h = 0, and hands the quadruple to `fire`. Stops early when
// `fire` returns true; returns whether it ever did.
template <typename F>
bool scan_contexts(const std::vector<double>& table, int n, int g, int h, F&& fire) {
    uint32_t bit_g = uint32_t{1} << g;
    uint32_t bit_h = uint32_t{1} << h;
    uint32_t contexts = uint32_t{1} << (n - 2);
    for (uint32_t c = 0; c < contexts; ++c) {
        // Spread the context bits around the two holes at positions g and h.
        uint32_t low = c & (bit_g - 1);
        uint32_t rest = c >> g;
        uint32_t mid = (rest & ((uint32_t{1} << (h - g - 1)) - 1)) << (g + 1);
        uint32_t high = (rest >> (h - g - 1)) << (h + 1);
        uint32_t x = low | mid | high;
        if (fire(table[x], table[x | bit_g], table[x | bit_h], table[x | bit_g | bit_h])) return true;
    }
    return false;
}

std::vector<double> snapshot(const std::function<double(const BitVector&)>& f, int n) {
    if (n > kToyLimit)
        throw std::invalid_argument("exhaustive dependency scan: n exceeds the enumeration limit");
    if (n < 2) throw std::invalid_argument("exhaustive dependency scan: need n >= 2");
    std::vector<double> t(size_t{1} << n);
    for (uint32_t i = 0; i < t.size(); ++i) t[i] = f(BitVector::from_table_index(i, n));
    return t;
}

}  // namespace

InteractionGraph exhaustive_dependency_vig(const std::function<double(const BitVector&)>& f, int n,
                                           DependencyCheck check) {
    std::vector<double> t = snapshot(f, n);
    InteractionGraph out(n, GraphKind::Boolean);
    for (int g = 0; g < n; ++g) {
        for (int h = g + 1; h < n; ++h) {
            bool fired;
            if (check == DependencyCheck::NonLinearity) {
                fired = scan_contexts(t, n, g, h, [](double a, double b, double c, double d) {
                    return cmp(a + d, b + c) != 0;
                });
            } else {
                fired = scan_contexts(t, n, g, h, [](double a, double b, double c, double d) {
                    return g_depends(a, b, c, d) || g_depends(a, c, b, d);
                });
            }
            if (fired) out.set(g, h, 1.0);
        }
    }
    return out;
}

DirectedDependencyGraph exhaustive_2dled(const std::function<double(const BitVector&)>& f, int n) {
    std::vector<double> t = snapshot(f, n);
    DirectedDependencyGraph out(n);
    for (int g = 0; g < n; ++g) {
        for (int h = g + 1; h < n; ++h) {
            bool dep_gh = false, dep_hg = false;
            scan_contexts(t, n, g, h, [&](double a, double b, double c, double d) {
                dep_gh = dep_gh || g_depends(a, b, c, d);
                dep_hg = dep_hg || g_depends(a, c, b, d);
                return dep_gh && dep_hg;
            });
            if (dep_gh) out.mark(g, h);
            if (dep_hg) out.mark(h, g);
        }
    }
    return out;
}

double epistasis(const InteractionGraph& g) {
    int n = g.n();
    if (n < 2) return 0.0;
    return static_cast<double>(g.edge_count()) / (static_cast<double>(n) * (n - 1) / 2.0);
}

double epistasis(const DirectedDependencyGraph& g) {
    int n = g.n();
    if (n < 2) return 0.0;
    return static_cast<double>(g.edge_count()) / (static_cast<double>(n) * (n - 1));
}

namespace {

// Bron–Kerbosch with pivoting over bitset rows.
struct CliqueFinder {
    int n;
    int words;
    std::vector<uint64_t> adj;  // n rows of `words` words
    std::vector<std::vector<int>>* out;
    std::vector<int> stack;

    const uint64_t* row(int v) const { return adj.data() + static_cast<size_t>(v) * words; }

    static int popcnt(const uint64_t* a, int words) {
        int c = 0;
        for (int i = 0; i < words; ++i) c += __builtin_popcountll(a[i]);
        return c;
    }

    void expand(std::vector<uint64_t> p, std::vector<uint64_t> x) {
        bool p_empty = true, x_empty = true;
        for (int i = 0; i < words; ++i) {
            p_empty = p_empty && p[i] == 0;
            x_empty = x_empty && x[i] == 0;
        }
        if (p_empty && x_empty) {
            out->push_back(stack);
            return;
        }
        // Pivot: vertex of P ∪ X with most neighbours in P.
        int pivot = -1, best = -1;
        for (int v = 0; v < n; ++v) {
            bool in = ((p[v >> 6] | x[v >> 6]) >> (v & 63)) & 1u;
            if (!in) continue;
            int cnt = 0;
            const uint64_t* rv = row(v);
            for (int i = 0; i < words; ++i) cnt += __builtin_popcountll(rv[i] & p[i]);
            if (cnt > best) {
                best = cnt;
                pivot = v;
            }
        }
        const uint64_t* rp = row(pivot);
        for (int v = 0; v < n; ++v) {
            bool candidate = ((p[v >> 6] >> (v & 63)) & 1u) && !((rp[v >> 6] >> (v & 63)) & 1u);
            if (!candidate) continue;
            std::vector<uint64_t> p2(words), x2(words);
            const uint64_t* rv = row(v);
            for (int i = 0; i < words; ++i) {
                p2[i] = p[i] & rv[i];
                x2[i] = x[i] & rv[i];
            }
            stack.push_back(v);
            expand(std::move(p2), std::move(x2));
            stack.pop_back();
            p[v >> 6] &= ~(uint64_t{1} << (v & 63));
            x[v >> 6] |= uint64_t{1} << (v & 63);
        }
    }
};

}  // namespace

std::vector<std::vector<int>> maximal_cliques(const InteractionGraph& g) {
    int n = g.n();
    int words = std::max(1, (n + 63) / 64);
    CliqueFinder f;
    f.n = n;
    f.words = words;
    f.adj.assign(static_cast<size_t>(n) * words, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && g.edge(a, b)) f.adj[static_cast<size_t>(a) * words + (b >> 6)] |= uint64_t{1} << (b & 63);
    std::vector<std::vector<int>> cliques;
    f.out = &cliques;
    std::vector<uint64_t> p(static_cast<size_t>(words), 0), x(static_cast<size_t>(words), 0);
    for (int v = 0; v < n; ++v) p[v >> 6] |= uint64_t{1} << (v & 63);
    if (n > 0) f.expand(std::move(p), std::move(x));
    for (auto& c : cliques) std::sort(c.begin(), c.end());
    std::sort(cliques.begin(), cliques.end());
    return cliques;
}

namespace {

std::string dump_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string graph_dump(const InteractionGraph& g) {
    std::string out = "n=" + std::to_string(g.n()) +
                      (g.kind() == GraphKind::Boolean ? " kind=boolean\n" : " kind=weighted\n");
    for (int a = 0; a < g.n(); ++a)
        for (int b = a + 1; b < g.n(); ++b)
            if (g.at(a, b) != 0.0)
                out += std::to_string(a + 1) + " " + std::to_string(b + 1) + " " +
                       (g.kind() == GraphKind::Boolean ? std::string("1") : dump_value(g.at(a, b))) +
                       "\n";
    return out;
}

std::string graph_dump(const DirectedDependencyGraph& g) {
    std::string out = "n=" + std::to_string(g.n()) + " kind=directed\n";
    for (int a = 0; a < g.n(); ++a)
        for (int b = 0; b < g.n(); ++b)
            if (a != b && g.at(a, b)) out += std::to_string(a + 1) + " " + std::to_string(b + 1) + " 1\n";
    return out;
}

}  // namespace graybox
