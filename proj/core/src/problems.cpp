#include "graybox/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "graybox/rng.hpp"
#include "spec_util.hpp"

namespace graybox {

using detail::expect_empty;
using detail::fail;
using detail::fmt_short;
using detail::fmt_u64;
using detail::KvMap;
using detail::parse_double;
using detail::parse_kv;
using detail::parse_u64;
using detail::require;
using detail::take;
using detail::take_int;

namespace {

// --- per-solution noise field tuning -----------------------------------------
//
// The field S is a random multilinear polynomial with masks of size 1..5.
// Sizes 1..3 are drawn against per-variable L1 budgets (the sum of |coef| over
// masks containing a fixed variable is about the budget regardless of n); the
// scales for sizes 4..5 are absolute and tiny, which separates the size-2 and
// size-4 spectral magnitudes by roughly five orders of magnitude.
//
// The mass-ratio cap bounds 2 * M_g / range(S) where M_g is variable g's L1
// mass. Since the discrete derivative of *any subset* of S's terms along g is
// at most 2 * M_g in absolute value, the cap simultaneously guarantees, after
// the affine rescale of S into (0, nVol):
//   - noise differences across one bit flip stay below 0.78 * nVol, so unit
//     fitness gaps survive any volume up to ~1.25;
//   - the guarantee keeps holding when terms of the field are removed one by
//     one (greedy denoising never sees an intermediate surrogate whose optimum
//     drifted while interaction terms remain).
constexpr double kSnoiseSingletonScale = 0.06;
constexpr double kSnoisePairBudget = 0.42;
constexpr double kSnoiseTripleBudget = 0.01;
constexpr double kSnoiseQuadScale = 5e-7;
constexpr double kSnoiseQuintScale = 5e-7;
constexpr double kSnoiseMassRatioCap = 0.42;
constexpr int kSnoiseCapIterations = 500;

int popcount32(uint32_t v) { return __builtin_popcount(v); }

}  // namespace

// --- onemax -------------------------------------------------------------------

ProblemInstance make_onemax(int n) {
    require(n >= 1 && n <= 100000, "onemax: n must be in [1, 100000]");
    WalshBuilder b(n);
    b.add({}, n / 2.0);
    for (int i = 0; i < n; ++i) b.add({static_cast<uint16_t>(i)}, -0.5);

    ProblemInstance p;
    p.name = "onemax:n=" + std::to_string(n);
    p.n = n;
    p.expansion = b.build();
    p.black_box = [](const BitVector& x) { return static_cast<double>(x.popcount()); };
    p.known_optimum = static_cast<double>(n);
    p.optimum_set = {BitVector(n).complemented()};
    p.is_optimal = [n](const BitVector& x) { return x.popcount() == n; };
    p.g_min = 1.0;
    return p;
}

// --- trap concatenations --------------------------------------------------------

namespace {

std::vector<double> trap_values(TrapKind kind, int k) {
    std::vector<double> t(static_cast<size_t>(k) + 1);
    for (int u = 0; u <= k; ++u) {
        if (kind == TrapKind::Dec) {
            t[static_cast<size_t>(u)] = (u == k) ? k : k - 1 - u;
        } else {
            t[static_cast<size_t>(u)] = (u == 0 || u == k) ? k / 2 : k / 2 - 1 - std::abs(u - k / 2);
        }
    }
    return t;
}

}  // namespace

ProblemInstance make_trap_concat(TrapKind kind, int k, int n, int o) {
    const std::string fam = kind == TrapKind::Dec ? "dec" : "bim";
    require(k >= 2 && k <= 16, fam + ": k must be in [2, 16]");
    require(kind == TrapKind::Dec || k % 2 == 0, fam + ": k must be even");
    require(o >= 0 && o < k, fam + ": overlap o must satisfy 0 <= o < k");
    const int step = k - o;
    require(n >= k, fam + ": n must be at least k");
    require(n % step == 0, fam + ": n must be divisible by k-o = " + std::to_string(step));
    const int n_blocks = n / step;

    std::vector<std::vector<uint16_t>> block_vars(static_cast<size_t>(n_blocks));
    for (int j = 0; j < n_blocks; ++j) {
        auto& blk = block_vars[static_cast<size_t>(j)];
        blk.reserve(static_cast<size_t>(k));
        for (int t = 0; t < k; ++t) blk.push_back(static_cast<uint16_t>((j * step + t) % n));
        std::sort(blk.begin(), blk.end());
    }

    std::vector<double> tv = trap_values(kind, k);
    AdditiveFunction af;
    af.n = n;
    for (const auto& blk : block_vars) {
        Subfunction sub;
        sub.vars = blk;
        sub.table.resize(size_t{1} << k);
        for (uint32_t idx = 0; idx < sub.table.size(); ++idx)
            sub.table[idx] = tv[static_cast<size_t>(popcount32(idx))];
        af.subs.push_back(std::move(sub));
    }

    ProblemInstance p;
    p.name = fam + ":k=" + std::to_string(k) + ",n=" + std::to_string(n) + ",o=" + std::to_string(o);
    p.n = n;
    p.expansion = from_additive(af);

    auto blocks_sp = std::make_shared<const std::vector<std::vector<uint16_t>>>(std::move(block_vars));
    auto tv_sp = std::make_shared<const std::vector<double>>(std::move(tv));
    p.black_box = [blocks_sp, tv_sp](const BitVector& x) {
        double f = 0.0;
        for (const auto& blk : *blocks_sp) {
            int u = 0;
            for (uint16_t v : blk) u += x.get(v) ? 1 : 0;
            f += (*tv_sp)[static_cast<size_t>(u)];
        }
        return f;
    };

    const bool bim = kind == TrapKind::Bim;
    p.known_optimum = static_cast<double>(n_blocks) * (bim ? k / 2 : k);
    p.is_optimal = [blocks_sp, k, bim](const BitVector& x) {
        for (const auto& blk : *blocks_sp) {
            int u = 0;
            for (uint16_t v : blk) u += x.get(v) ? 1 : 0;
            if (u != k && !(bim && u == 0)) return false;
        }
        return true;
    };

    if (!bim) {
        p.optimum_set = {BitVector(n).complemented()};
    } else if (o > 0) {
        // Overlapping blocks chain through shared variables, so only the two
        // uniform assignments reach every block's peak.
        p.optimum_set = {BitVector(n), BitVector(n).complemented()};
    } else if (n_blocks <= 12) {
        for (uint32_t pattern = 0; pattern < (1u << n_blocks); ++pattern) {
            BitVector x(n);
            for (int j = 0; j < n_blocks; ++j)
                if ((pattern >> j) & 1u)
                    for (uint16_t v : (*blocks_sp)[static_cast<size_t>(j)]) x.set(v, true);
            p.optimum_set.push_back(std::move(x));
        }
        std::sort(p.optimum_set.begin(), p.optimum_set.end());
    }
    p.g_min = 1.0;
    return p;
}

// --- circular NK ----------------------------------------------------------------

namespace {

// Maximizes sum_i t_i(x_i..x_{i+k}) over the ring by conditioning on the first
// k bits and sweeping a k-bit state (the last k assigned bits) left to right.
double nk_ring_optimum(const std::vector<std::vector<double>>& t, int n, int k) {
    const int S = 1 << k;
    const double kNeg = -std::numeric_limits<double>::infinity();
    double best = kNeg;
    std::vector<double> dp(static_cast<size_t>(S)), ndp(static_cast<size_t>(S));
    for (int beta = 0; beta < S; ++beta) {
        std::fill(dp.begin(), dp.end(), kNeg);
        dp[static_cast<size_t>(beta)] = 0.0;
        for (int p = k; p < n; ++p) {
            std::fill(ndp.begin(), ndp.end(), kNeg);
            const auto& tab = t[static_cast<size_t>(p - k)];
            for (int s = 0; s < S; ++s) {
                if (dp[static_cast<size_t>(s)] == kNeg) continue;
                for (int b = 0; b < 2; ++b) {
                    double v = dp[static_cast<size_t>(s)] + tab[static_cast<size_t>(s | (b << k))];
                    int ns = (s >> 1) | (b << (k - 1));
                    if (v > ndp[static_cast<size_t>(ns)]) ndp[static_cast<size_t>(ns)] = v;
                }
            }
            dp.swap(ndp);
        }
        // Close the ring: windows that wrap into the conditioned prefix.
        for (int s = 0; s < S; ++s) {
            if (dp[static_cast<size_t>(s)] == kNeg) continue;
            double closing = 0.0;
            for (int i = n - k; i < n; ++i) {
                uint32_t idx = 0;
                for (int j = 0; j <= k; ++j) {
                    int pos = i + j;
                    bool bit = pos < n ? ((s >> (pos - (n - k))) & 1) != 0
                                       : ((beta >> (pos - n)) & 1) != 0;
                    idx |= static_cast<uint32_t>(bit) << j;
                }
                closing += t[static_cast<size_t>(i)][idx];
            }
            double v = dp[static_cast<size_t>(s)] + closing;
            if (v > best) best = v;
        }
    }
    return best;
}

}  // namespace

ProblemInstance make_nk(int n, int k, uint64_t seed) {
    require(k >= 1 && k <= 12, "nk: k must be in [1, 12]");
    require(n >= k + 1 && n <= 100000, "nk: n must be in [k+1, 100000]");
    const int arity = k + 1;
    const uint32_t tsize = 1u << arity;

    // Table entries are a pure function of (n, k, seed, i, idx).
    const uint64_t key = mix64(mix64(mix64(seed) ^ static_cast<uint64_t>(n)) ^ static_cast<uint64_t>(k));
    std::vector<std::vector<double>> tables(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& tab = tables[static_cast<size_t>(i)];
        tab.resize(tsize);
        for (uint32_t idx = 0; idx < tsize; ++idx)
            tab[idx] = keyed_real(key, static_cast<uint64_t>(i) * tsize + idx);
    }

    auto af = std::make_shared<AdditiveFunction>();
    af->n = n;
    for (int i = 0; i < n; ++i) {
        Subfunction sub;
        for (int j = 0; j <= k; ++j) sub.vars.push_back(static_cast<uint16_t>((i + j) % n));
        sub.table = tables[static_cast<size_t>(i)];
        af->subs.push_back(std::move(sub));
    }

    ProblemInstance p;
    p.name = "nk:n=" + std::to_string(n) + ",k=" + std::to_string(k) + ",seed=" + fmt_u64(seed);
    p.n = n;
    p.expansion = from_additive(*af);
    p.black_box = [af](const BitVector& x) { return af->evaluate(x); };
    const double opt = nk_ring_optimum(tables, n, k);
    p.known_optimum = opt;
    p.is_optimal = [af, opt](const BitVector& x) { return af->evaluate(x) >= opt - 1e-9; };
    return p;
}

// --- toroidal Ising spin glass ----------------------------------------------------

ProblemInstance make_isg(int L, uint64_t seed) {
    require(L >= 2 && L <= 100, "isg: L must be in [2, 100]");
    const int n = L * L;

    struct Edge {
        int a, b;
        double j;
    };
    auto edges = std::make_shared<std::vector<Edge>>();
    edges->reserve(static_cast<size_t>(2 * n));
    Rng rng(mix64(seed ^ 0x697367u));  // instance-family tag
    for (int r = 0; r < L; ++r) {
        for (int c = 0; c < L; ++c) {
            int i = r * L + c;
            int right = r * L + (c + 1) % L;
            int down = ((r + 1) % L) * L + c;
            edges->push_back({i, right, rng.coin() ? 1.0 : -1.0});
            edges->push_back({i, down, rng.coin() ? 1.0 : -1.0});
        }
    }

    WalshBuilder b(n);
    for (const auto& e : *edges) {
        // s_i * s_j with s = 2x - 1 equals the parity function of {i, j}.
        Mask m = {static_cast<uint16_t>(std::min(e.a, e.b)), static_cast<uint16_t>(std::max(e.a, e.b))};
        b.add(std::move(m), e.j);
    }

    ProblemInstance p;
    p.name = "isg:L=" + std::to_string(L) + ",seed=" + fmt_u64(seed);
    p.n = n;
    p.expansion = b.build();
    p.black_box = [edges](const BitVector& x) {
        double f = 0.0;
        for (const auto& e : *edges) f += x.get(e.a) == x.get(e.b) ? e.j : -e.j;
        return f;
    };
    p.g_min = 2.0;  // every single-spin flip moves each incident term by 0 or +-2

    if (n <= 25) {
        // Exact ground states by Gray-code enumeration with O(degree) deltas.
        std::vector<std::vector<std::pair<int, double>>> adj(static_cast<size_t>(n));
        for (const auto& e : *edges) {
            adj[static_cast<size_t>(e.a)].push_back({e.b, e.j});
            adj[static_cast<size_t>(e.b)].push_back({e.a, e.j});
        }
        BitVector x(n);
        double f = p.black_box(x);
        double best = f;
        std::vector<BitVector> opt = {x};
        uint32_t gray_prev = 0;
        for (uint64_t i = 1; i < (uint64_t{1} << n); ++i) {
            uint32_t gray = static_cast<uint32_t>(i ^ (i >> 1));
            int bit = __builtin_ctz(gray ^ gray_prev);
            gray_prev = gray;
            double s_bit = x.get(bit) ? 1.0 : -1.0;
            double neigh = 0.0;
            for (const auto& [u, j] : adj[static_cast<size_t>(bit)]) neigh += j * (x.get(u) ? 1.0 : -1.0);
            f -= 2.0 * s_bit * neigh;
            x.flip(bit);
            // Values are integers of fixed parity, so +-0.5 separates ties exactly.
            if (f > best + 0.5) {
                best = f;
                opt.assign(1, x);
            } else if (f > best - 0.5) {
                opt.push_back(x);
            }
        }
        std::sort(opt.begin(), opt.end());
        p.known_optimum = best;
        p.optimum_set = std::move(opt);
        auto bb = p.black_box;
        p.is_optimal = [bb, best](const BitVector& y) { return bb(y) >= best - 0.5; };
    }
    return p;
}

// --- size-2 Walsh noise -------------------------------------------------------------

ProblemInstance add_walsh_noise(const ProblemInstance& base, int c, uint64_t seed,
                                std::optional<double> g_min_override) {
    require(c >= 1 && c <= 1000, "noise: c must be in [1, 1000]");
    require(base.noise_c == 0 && base.noise_nvol == 0.0, "noise: instance is already noised");
    require(base.n >= 2, "noise: n must be at least 2");
    std::optional<double> g = g_min_override ? g_min_override : base.g_min;
    require(g.has_value(),
            "noise: smallest fitness gap unknown for '" + base.name + "'; pass gmin= explicitly");
    require(*g > 0.0, "noise: gmin must be positive");

    const int n = base.n;
    const double eps = *g / (4.0 * n * c);
    struct PairTerm {
        int a, b;
        double w;
    };
    auto terms = std::make_shared<std::vector<PairTerm>>();
    terms->reserve(static_cast<size_t>(n) * c);
    Rng rng(mix64(seed ^ 0x326e6f697365u));  // noise-family tag
    for (int v = 0; v < n; ++v) {
        for (int t = 0; t < c; ++t) {
            int u = rng.below_int(n - 1);
            if (u >= v) ++u;
            double sgn = rng.coin() ? 1.0 : -1.0;
            double mag = rng.real(eps / 2.0, eps);
            terms->push_back({std::min(u, v), std::max(u, v), sgn * mag});
        }
    }

    WalshBuilder b(n);
    for (const auto& t : base.expansion.terms()) b.add_term(t);
    for (const auto& t : *terms)
        b.add({static_cast<uint16_t>(t.a), static_cast<uint16_t>(t.b)}, t.w);

    ProblemInstance p;
    p.name = base.name + "+noise(c=" + std::to_string(c) + ",seed=" + fmt_u64(seed) +
             (g_min_override ? ",gmin=" + fmt_short(*g) : "") + ")";
    p.n = n;
    p.expansion = b.build();
    auto bb = base.black_box;
    p.black_box = [bb, terms](const BitVector& x) {
        double f = bb(x);
        for (const auto& t : *terms) f += x.get(t.a) == x.get(t.b) ? t.w : -t.w;
        return f;
    };
    // The total perturbation of any solution is below gmin/4, so every strict
    // order relation of the base objective is preserved; reaching a base
    // optimum remains the success criterion and the base optimum value is kept
    // for reporting (fitness is reported on the noised scale).
    p.known_optimum = base.known_optimum;
    p.is_optimal = base.is_optimal;
    p.noise_c = c;
    return p;
}

// --- per-solution noise ----------------------------------------------------------------

ProblemInstance add_solution_noise(const ProblemInstance& base, double nvol, uint64_t seed) {
    require(nvol > 0.0 && nvol <= 1000.0, "snoise: nVol must be in (0, 1000]");
    require(base.noise_c == 0 && base.noise_nvol == 0.0, "snoise: instance is already noised");
    const int n = base.n;
    require(n >= 1 && n <= kToyLimit, "snoise: only toy sizes (n <= 20) are supported");
    const size_t N = size_t{1} << n;

    // Draw the field's coefficients; the draw sequence is fixed by (seed, n).
    const double pair_scale = n >= 2 ? kSnoisePairBudget / ((n - 1) * 0.75) : 0.0;
    const double triple_scale =
        n >= 3 ? kSnoiseTripleBudget / (0.75 * (n - 1) * (n - 2) / 2.0) : 0.0;
    std::vector<double> coef(N, 0.0);
    Rng rng(mix64(seed ^ 0x736e6f697365u));  // noise-family tag
    for (uint32_t m = 1; m < N; ++m) {
        int s = popcount32(m);
        if (s > 5) continue;
        double scale = s == 1   ? kSnoiseSingletonScale
                       : s == 2 ? pair_scale
                       : s == 3 ? triple_scale
                       : s == 4 ? kSnoiseQuadScale
                                : kSnoiseQuintScale;
        double mag = rng.real(scale / 2.0, scale);
        coef[m] = rng.coin() ? mag : -mag;
    }

    auto values_of = [](std::vector<double> cf) {
        walsh_hadamard(cf);
        return cf;
    };
    std::vector<double> S = values_of(coef);
    for (int iter = 0; iter < kSnoiseCapIterations; ++iter) {
        auto [lo_it, hi_it] = std::minmax_element(S.begin(), S.end());
        double range = *hi_it - *lo_it;
        if (range <= 0.0) break;
        int worst = -1;
        double worst_ratio = 0.0;
        for (int gv = 0; gv < n; ++gv) {
            double mass = 0.0;
            for (uint32_t m = 1; m < N; ++m)
                if ((m >> gv) & 1u) mass += std::abs(coef[m]);
            double ratio = 2.0 * mass / range;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                worst = gv;
            }
        }
        if (worst_ratio <= kSnoiseMassRatioCap) break;
        for (uint32_t m = 1; m < N; ++m)
            if ((m >> static_cast<uint32_t>(worst)) & 1u) coef[m] *= 0.9;
        S = values_of(coef);
    }

    auto [lo_it, hi_it] = std::minmax_element(S.begin(), S.end());
    const double min_s = *lo_it;
    const double range = std::max(*hi_it - min_s, std::numeric_limits<double>::min());
    const double lo = 1e-6 * nvol;
    const double span = nvol * (1.0 - 2e-6);
    auto eta = std::make_shared<std::vector<double>>(N);
    for (size_t i = 0; i < N; ++i) (*eta)[i] = lo + span * (S[i] - min_s) / range;

    ProblemInstance p;
    p.name = base.name + "+snoise(nVol=" + fmt_short(nvol) + ",seed=" + fmt_u64(seed) + ")";
    p.n = n;
    auto bb = base.black_box;
    p.black_box = [bb, eta](const BitVector& x) { return bb(x) + (*eta)[x.table_index()]; };
    p.expansion = wht_full(p.black_box, n);

    double best = -std::numeric_limits<double>::infinity();
    std::vector<BitVector> opt;
    for (uint32_t i = 0; i < N; ++i) {
        BitVector x = BitVector::from_table_index(i, n);
        double f = p.black_box(x);
        if (f > best) {
            best = f;
            opt.clear();
        }
        if (f == best) opt.push_back(std::move(x));
    }
    p.known_optimum = best;
    p.optimum_set = std::move(opt);
    auto bbn = p.black_box;
    p.is_optimal = [bbn, best](const BitVector& x) { return bbn(x) >= best; };
    p.noise_nvol = nvol;
    return p;
}

// --- spec strings ---------------------------------------------------------------------

ProblemInstance parse_problem_spec(const std::string& spec, std::optional<uint64_t> auto_seed) {
    auto take_seed = [&](KvMap& kv, const std::string& ctx) -> uint64_t {
        if (kv.count("seed")) return parse_u64(take(kv, "seed", ctx), ctx + " seed");
        require(auto_seed.has_value(), ctx + ": missing key 'seed'");
        return *auto_seed;
    };

    const size_t plus = spec.find('+');
    const std::string base_spec = spec.substr(0, plus);
    const std::string suffix = plus == std::string::npos ? "" : spec.substr(plus + 1);

    const size_t colon = base_spec.find(':');
    require(colon != std::string::npos && colon > 0,
            "problem spec '" + spec + "': expected family:key=value,...");
    const std::string family = base_spec.substr(0, colon);
    KvMap kv = parse_kv(base_spec.substr(colon + 1), family);

    ProblemInstance p;
    if (family == "onemax") {
        int n = take_int(kv, "n", family);
        expect_empty(kv, family);
        p = make_onemax(n);
    } else if (family == "dec" || family == "bim") {
        int k = take_int(kv, "k", family);
        int n = take_int(kv, "n", family);
        int o = kv.count("o") ? take_int(kv, "o", family) : 0;
        expect_empty(kv, family);
        p = make_trap_concat(family == "dec" ? TrapKind::Dec : TrapKind::Bim, k, n, o);
    } else if (family == "nk") {
        int n = take_int(kv, "n", family);
        int k = take_int(kv, "k", family);
        uint64_t seed = take_seed(kv, family);
        expect_empty(kv, family);
        p = make_nk(n, k, seed);
    } else if (family == "isg") {
        int L = take_int(kv, "L", family);
        uint64_t seed = take_seed(kv, family);
        expect_empty(kv, family);
        p = make_isg(L, seed);
    } else {
        fail("problem spec '" + spec + "': unknown family '" + family + "'");
    }

    if (suffix.empty()) return p;
    auto inner = [&](const char* head) -> std::optional<KvMap> {
        const std::string h = head;
        if (suffix.rfind(h, 0) != 0 || suffix.back() != ')') return std::nullopt;
        return parse_kv(suffix.substr(h.size(), suffix.size() - h.size() - 1), h + "...)");
    };
    if (auto kv2 = inner("noise(")) {
        int c = take_int(*kv2, "c", "noise");
        uint64_t seed = take_seed(*kv2, "noise");
        std::optional<double> gmin;
        if (kv2->count("gmin")) gmin = parse_double(take(*kv2, "gmin", "noise"), "noise gmin");
        expect_empty(*kv2, "noise");
        return add_walsh_noise(p, c, seed, gmin);
    }
    if (auto kv2 = inner("snoise(")) {
        double nvol = parse_double(take(*kv2, "nVol", "snoise"), "snoise nVol");
        uint64_t seed = take_seed(*kv2, "snoise");
        expect_empty(*kv2, "snoise");
        return add_solution_noise(p, nvol, seed);
    }
    fail("problem spec '" + spec + "': unknown suffix '+" + suffix + "'");
}

}  // namespace graybox
