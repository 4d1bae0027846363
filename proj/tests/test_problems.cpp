#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "graybox/problems.hpp"
#include "oracles.hpp"

using graybox::add_solution_noise;
using graybox::add_walsh_noise;
using graybox::BitVector;
using graybox::make_isg;
using graybox::make_nk;
using graybox::make_onemax;
using graybox::make_trap_concat;
using graybox::parse_problem_spec;
using graybox::ProblemInstance;
using graybox::Rng;
using graybox::TrapKind;

TEST_CASE("onemax: counter with known unique optimum") {
    ProblemInstance p = make_onemax(12);
    CHECK(p.name == "onemax:n=12");
    CHECK(p.n == 12);
    CHECK(p.expansion.term_count() == 13);
    CHECK(p.black_box(BitVector::from_string("101010101010")) == 6.0);
    CHECK(p.known_optimum == 12.0);
    REQUIRE(p.optimum_set.size() == 1);
    CHECK(p.optimum_set[0].popcount() == 12);
    CHECK(p.is_optimal(BitVector(12).complemented()));
    CHECK_FALSE(p.is_optimal(BitVector(12)));
    CHECK(p.g_min == 1.0);
}

TEST_CASE("deceptive trap blocks: peak at all-ones, slope toward all-zeros") {
    ProblemInstance p = make_trap_concat(TrapKind::Dec, 4, 8, 0);
    CHECK(p.name == "dec:k=4,n=8,o=0");
    auto at = [&](const std::string& s) { return p.black_box(BitVector::from_string(s)); };
    CHECK(at("11111111") == 8.0);
    CHECK(at("00000000") == 6.0);   // each block sits on the deceptive slope peak
    CHECK(at("11110000") == 7.0);
    CHECK(at("11100000") == 3.0);   // u=3 block scores 0, u=0 block scores 3
    CHECK(p.known_optimum == 8.0);
    REQUIRE(p.optimum_set.size() == 1);
    CHECK(p.is_optimal(p.optimum_set[0]));
    // the gray-box expansion computes the same function
    Rng rng(107);
    for (int t = 0; t < 30; ++t) {
        BitVector x = oracle::random_point(rng, 8);
        CHECK(p.expansion.evaluate(x) == doctest::Approx(p.black_box(x)).epsilon(1e-10));
    }
}

TEST_CASE("bimodal trap blocks: peaks at both uniform assignments") {
    ProblemInstance p = make_trap_concat(TrapKind::Bim, 4, 8, 0);
    auto at = [&](const std::string& s) { return p.black_box(BitVector::from_string(s)); };
    CHECK(at("11111111") == 4.0);
    CHECK(at("00000000") == 4.0);
    CHECK(at("00001111") == 4.0);  // per-block choice is free without overlap
    CHECK(at("10000000") == 2.0);  // u=1 block scores 0, uniform block scores 2
    CHECK(p.is_optimal(BitVector(8)));
    CHECK(p.is_optimal(BitVector(8).complemented()));
    CHECK(p.is_optimal(BitVector::from_string("00001111")));
    CHECK_FALSE(p.is_optimal(BitVector::from_string("00011111")));
    // all 2^blocks mixed optima are enumerated
    CHECK(p.optimum_set.size() == 4);
}

TEST_CASE("overlapping blocks share variables and tile the ring") {
    ProblemInstance p = make_trap_concat(TrapKind::Dec, 8, 24, 5);
    CHECK(p.name == "dec:k=8,n=24,o=5");
    CHECK(p.known_optimum == 64.0);  // 24/(8-5) = 8 blocks, peak 8 each
    CHECK(p.black_box(BitVector(24).complemented()) == 64.0);
    CHECK(p.is_optimal(BitVector(24).complemented()));
    CHECK_FALSE(p.is_optimal(BitVector(24)));
    // with overlap, all-zeros scores (k-1) per block
    CHECK(p.black_box(BitVector(24)) == 56.0);
    CHECK_THROWS_AS(make_trap_concat(TrapKind::Dec, 8, 25, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_trap_concat(TrapKind::Dec, 8, 24, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_trap_concat(TrapKind::Bim, 5, 20, 0), std::invalid_argument);  // odd k
}

TEST_CASE("ring landscapes: dynamic-programming optimum matches enumeration") {
    Rng rng(109);
    for (int inst = 0; inst < 5; ++inst) {
        int n = 8 + inst;
        int k = 1 + inst % 3;
        ProblemInstance p = make_nk(n, k, 1000 + static_cast<uint64_t>(inst));
        REQUIRE(p.known_optimum.has_value());
        double brute = oracle::best_value(p.black_box, n);
        CHECK(*p.known_optimum == doctest::Approx(brute).epsilon(1e-12));
        // expansion and black box agree
        for (int t = 0; t < 10; ++t) {
            BitVector x = oracle::random_point(rng, n);
            CHECK(p.expansion.evaluate(x) == doctest::Approx(p.black_box(x)).epsilon(1e-9));
        }
        // the optimality predicate accepts exactly the enumerated maximizers
        int accepted = 0;
        for (uint32_t i = 0; i < (1u << n); ++i) {
            BitVector x = BitVector::from_table_index(i, n);
            if (p.is_optimal(x)) {
                ++accepted;
                CHECK(p.black_box(x) == doctest::Approx(brute).epsilon(1e-9));
            }
        }
        CHECK(accepted >= 1);
    }
}

TEST_CASE("ring landscapes are reproducible from their key") {
    ProblemInstance a = make_nk(12, 3, 7);
    ProblemInstance b = make_nk(12, 3, 7);
    ProblemInstance c = make_nk(12, 3, 8);
    CHECK(a.name == "nk:n=12,k=3,seed=7");
    Rng rng(113);
    bool any_diff = false;
    for (int t = 0; t < 20; ++t) {
        BitVector x = oracle::random_point(rng, 12);
        CHECK(a.black_box(x) == b.black_box(x));
        any_diff = any_diff || a.black_box(x) != c.black_box(x);
    }
    CHECK(any_diff);
}

TEST_CASE("spin lattices: pure pair expansion, enumerated ground states at toy sizes") {
    ProblemInstance p = make_isg(4, 3);
    CHECK(p.name == "isg:L=4,seed=3");
    CHECK(p.n == 16);
    for (const auto& t : p.expansion.terms()) CHECK(t.mask.size() == 2);
    Rng rng(127);
    for (int t = 0; t < 20; ++t) {
        BitVector x = oracle::random_point(rng, 16);
        CHECK(p.expansion.evaluate(x) == doctest::Approx(p.black_box(x)).epsilon(1e-9));
    }
    REQUIRE(p.known_optimum.has_value());
    CHECK(*p.known_optimum == doctest::Approx(oracle::best_value(p.black_box, 16)).epsilon(1e-9));
    REQUIRE(!p.optimum_set.empty());
    for (const auto& x : p.optimum_set) CHECK(p.is_optimal(x));
    // spin symmetry: the complement of a ground state is a ground state
    CHECK(p.is_optimal(p.optimum_set[0].complemented()));
}

TEST_CASE("pair noise preserves every strict order relation of the base objective") {
    ProblemInstance base = make_trap_concat(TrapKind::Dec, 4, 8, 0);
    ProblemInstance noised = add_walsh_noise(base, 3, 42);
    CHECK(noised.noise_c == 3);
    CHECK(noised.name == "dec:k=4,n=8,o=0+noise(c=3,seed=42)");
    CHECK(noised.expansion.term_count() > base.expansion.term_count());
    Rng rng(131);
    for (int t = 0; t < 200; ++t) {
        BitVector x = oracle::random_point(rng, 8);
        BitVector y = oracle::random_point(rng, 8);
        double bx = base.black_box(x), by = base.black_box(y);
        if (bx > by) CHECK(noised.black_box(x) > noised.black_box(y));
        // the perturbation itself stays far below the smallest base gap
        CHECK(std::abs(noised.black_box(x) - bx) < 0.25);
    }
    // success is still defined by the base optimum
    CHECK(noised.is_optimal(BitVector(8).complemented()));
    // and the noised maximizer is that same point
    double best = oracle::best_value(noised.black_box, 8);
    CHECK(noised.black_box(BitVector(8).complemented()) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("pair noise needs a known smallest gap") {
    ProblemInstance nk = make_nk(8, 2, 5);
    CHECK_FALSE(nk.g_min.has_value());
    CHECK_THROWS_AS(add_walsh_noise(nk, 2, 7), std::invalid_argument);
    ProblemInstance noised = add_walsh_noise(nk, 2, 7, 0.01);
    CHECK(noised.name == "nk:n=8,k=2,seed=5+noise(c=2,seed=7,gmin=0.01)");
    CHECK_THROWS_AS(add_walsh_noise(noised, 2, 7, 0.01), std::invalid_argument);  // already noised
}

TEST_CASE("per-solution noise: positive, bounded, unit-gap order preserving at volume 1") {
    ProblemInstance base = make_onemax(8);
    ProblemInstance noised = add_solution_noise(base, 1.0, 11);
    CHECK(noised.noise_nvol == 1.0);
    CHECK(noised.name == "onemax:n=8+snoise(nVol=1,seed=11)");
    for (uint32_t i = 0; i < 256; ++i) {
        BitVector x = BitVector::from_table_index(i, 8);
        double eta = noised.black_box(x) - base.black_box(x);
        CHECK(eta > 0.0);
        CHECK(eta < 1.0);
        CHECK(noised.expansion.evaluate(x) == doctest::Approx(noised.black_box(x)).epsilon(1e-9));
    }
    // gaps of at least 1 keep their direction, so the optimum is unchanged
    Rng rng(137);
    for (int t = 0; t < 200; ++t) {
        BitVector x = oracle::random_point(rng, 8);
        BitVector y = oracle::random_point(rng, 8);
        if (base.black_box(x) > base.black_box(y))
            CHECK(noised.black_box(x) > noised.black_box(y));
    }
    REQUIRE(!noised.optimum_set.empty());
    CHECK(noised.optimum_set[0].popcount() == 8);
    CHECK(noised.is_optimal(BitVector(8).complemented()));
    CHECK_FALSE(noised.is_optimal(BitVector(8)));
}

TEST_CASE("per-solution noise is a pure function of its seed") {
    ProblemInstance base = make_onemax(6);
    ProblemInstance a = add_solution_noise(base, 1.2, 5);
    ProblemInstance b = add_solution_noise(base, 1.2, 5);
    ProblemInstance c = add_solution_noise(base, 1.2, 6);
    bool any_diff = false;
    for (uint32_t i = 0; i < 64; ++i) {
        BitVector x = BitVector::from_table_index(i, 6);
        CHECK(a.black_box(x) == b.black_box(x));
        any_diff = any_diff || a.black_box(x) != c.black_box(x);
    }
    CHECK(any_diff);
    CHECK_THROWS_AS(add_solution_noise(make_onemax(21), 1.0, 5), std::invalid_argument);  // toy only
}

TEST_CASE("spec strings parse to canonical instances") {
    CHECK(parse_problem_spec("onemax:n=10").name == "onemax:n=10");
    CHECK(parse_problem_spec("dec:k=8,n=16").name == "dec:k=8,n=16,o=0");
    CHECK(parse_problem_spec("bim:k=6,n=12,o=2").name == "bim:k=6,n=12,o=2");
    CHECK(parse_problem_spec("nk:n=10,k=2,seed=5").name == "nk:n=10,k=2,seed=5");
    CHECK(parse_problem_spec("isg:L=4,seed=3").name == "isg:L=4,seed=3");
    ProblemInstance p = parse_problem_spec("dec:k=4,n=8+noise(c=2,seed=9)");
    CHECK(p.name == "dec:k=4,n=8,o=0+noise(c=2,seed=9)");
    CHECK(p.noise_c == 2);
    ProblemInstance s = parse_problem_spec("onemax:n=8+snoise(nVol=1.2,seed=4)");
    CHECK(s.noise_nvol == 1.2);
}

TEST_CASE("omitted generator seeds fall back to the provided auto seed") {
    // without a fallback the spec is incomplete
    CHECK_THROWS_AS(parse_problem_spec("nk:n=10,k=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_problem_spec("onemax:n=8+snoise(nVol=1.0)"), std::invalid_argument);
    // with one, the canonical name records the seed actually used
    ProblemInstance p = parse_problem_spec("nk:n=10,k=2", 77);
    CHECK(p.name == "nk:n=10,k=2,seed=77");
    // an explicit seed always wins over the fallback
    CHECK(parse_problem_spec("nk:n=10,k=2,seed=5", 77).name == "nk:n=10,k=2,seed=5");
    // deterministic problems ignore the fallback entirely
    CHECK(parse_problem_spec("onemax:n=10", 77).name == "onemax:n=10");
}

TEST_CASE("malformed specs are rejected with the offending token named") {
    CHECK_THROWS_AS(parse_problem_spec("fancy:n=10"), std::invalid_argument);
    CHECK_THROWS_AS(parse_problem_spec("onemax"), std::invalid_argument);
    CHECK_THROWS_AS(parse_problem_spec("onemax:n=10,bogus=3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_problem_spec("onemax:n=ten"), std::invalid_argument);
    CHECK_THROWS_AS(parse_problem_spec("onemax:n=10+fuzz(c=1)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_problem_spec("onemax:n=10+noise(c=1,seed=2)+noise(c=1,seed=2)"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_problem_spec("dec:k=1,n=8"), std::invalid_argument);
    try {
        parse_problem_spec("fancy:n=10");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("fancy") != std::string::npos);
    }
}
