#include "buchi/bellman.hpp"
#include "buchi/errors.hpp"
#include "buchi/generator.hpp"
#include "buchi/oracles.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace buchi;

TEST_CASE("finite-horizon returns") {
    const auto c = fixtures::ex1();
    const SurrogateReward r(1.0, 0.5);
    CHECK(finite_horizon_return(c, r, 0, 2) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(finite_horizon_return(c, r, 0, 0) == 0.0);
    CHECK(finite_horizon_return(c, r, 1, 0) == 0.5);
    CHECK(finite_horizon_return(c, r, 2, 50) == 0.0);
}

TEST_CASE("finite-horizon returns grow with K and converge to the discounted value") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ChainSpec spec;
        spec.states = 5 + seed % 10;
        spec.seed = seed;
        const auto g = generate_chain(spec);
        const auto c = induce_chain(g.model, g.policy);
        const SurrogateReward r(0.8, 0.3);
        const Vector exact = solve_discounted(build_system(c, r)).value;
        Vector previous(c.size(), 0.0);
        for (std::size_t k : {0, 1, 2, 5, 10, 40}) {
            const Vector e = finite_horizon_returns(c, r, k);
            for (std::size_t s = 0; s < c.size(); ++s) {
                CHECK(e[s] >= previous[s] - 1e-15);
                CHECK(std::abs(e[s] - exact[s]) <= std::pow(0.8, k + 1) / (1 - 0.8) * 0.7 + 1e-12);
            }
            previous = e;
        }
    }
}

TEST_CASE("estimator modes parse") {
    CHECK(EstimatorMode::parse("bscc-aware").kind == EstimatorMode::Kind::bscc_aware);
    const auto cap = EstimatorMode::parse("cap:25");
    CHECK(cap.kind == EstimatorMode::Kind::cap);
    CHECK(cap.horizon == 25);
    CHECK(cap.str() == "cap:25");
    CHECK_THROWS_AS(EstimatorMode::parse("cap:"), InputError);
    CHECK_THROWS_AS(EstimatorMode::parse("cap:-1"), InputError);
    CHECK_THROWS_AS(EstimatorMode::parse("horizon"), InputError);
}

TEST_CASE("Monte Carlo returns") {
    SUBCASE("split state is a fair coin") {
        const auto c = fixtures::builtin_chain("split");
        const auto est = mc_return(c, decompose(c), SurrogateReward(1.0, 0.5), 0, 100000, 12345, {});
        CHECK(std::abs(est.mean - 0.5) <= 3 * est.std_error);
        CHECK(est.std_error == doctest::Approx(0.5 / std::sqrt(1e5)).epsilon(0.01));
    }
    SUBCASE("accepting self-loop is exactly one") {
        const auto c = make_chain(Matrix(1, 1, 1.0), {true});
        const auto est = mc_return(c, decompose(c), SurrogateReward(1.0, 0.5), 0, 1000, 1, {});
        CHECK(est.mean == 1.0);
        CHECK(est.std_error == 0.0);
    }
    SUBCASE("rejecting self-loop is exactly zero in every mode") {
        const auto c = fixtures::ex1();
        const auto p = decompose(c);
        CHECK(mc_return(c, p, SurrogateReward(1.0, 0.5), 2, 500, 1, {}).mean == 0.0);
        CHECK(mc_return(c, p, SurrogateReward(0.9, 0.5), 2, 500, 1, EstimatorMode::parse("cap:100")).mean == 0.0);
    }
    SUBCASE("bscc-aware mode needs gamma = 1") {
        const auto c = fixtures::ex1();
        CHECK_THROWS_AS(mc_return(c, decompose(c), SurrogateReward(0.9, 0.5), 0, 10, 1, {}), ModeRequiresGammaOne);
    }
    SUBCASE("cap mode equals the finite-horizon expectation on a deterministic chain") {
        const auto c = fixtures::ex1();
        const SurrogateReward r(1.0, 0.5);
        const auto est = mc_return(c, decompose(c), r, 0, 10, 3, EstimatorMode::parse("cap:2"));
        CHECK(est.mean == finite_horizon_return(c, r, 0, 2));
    }
    SUBCASE("results depend only on seed and sample count") {
        const auto c = fixtures::builtin_chain("loop2");
        const auto p = decompose(c);
        const SurrogateReward r(1.0, 0.7);
        const auto a = mc_return(c, p, r, 0, 20000, 9, EstimatorMode::parse("cap:30"), Backend::serial);
        const auto b = mc_return(c, p, r, 0, 20000, 9, EstimatorMode::parse("cap:30"), Backend::omp);
        CHECK(a.mean == b.mean);
        CHECK(a.std_error == b.std_error);
        const auto d = mc_return(c, p, r, 0, 20000, 10, EstimatorMode::parse("cap:30"));
        CHECK(d.mean != a.mean);
    }
}

TEST_CASE("bscc-aware estimates agree with the constrained solve") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ChainSpec spec;
        spec.states = 6 + seed;
        spec.rejecting_bsccs = 1 + seed % 2;
        spec.seed = seed;
        const auto g = generate_chain(spec);
        const auto c = induce_chain(g.model, g.policy);
        const auto p = decompose(c);
        const Vector exact = solve_constrained(c, p, 0.9).value;
        for (std::size_t s = 0; s < c.size(); ++s) {
            const auto est = mc_return(c, p, SurrogateReward(1.0, 0.9), s, 20000, seed, {});
            CHECK(std::abs(est.mean - exact[s]) <= 4 * est.std_error + 1e-12);
        }
    }
}

TEST_CASE("reachability probability") {
    const auto a = fixtures::ex1();
    CHECK(reachability_probability(a, decompose(a)) == Vector{1.0, 1.0, 0.0});
    const auto split = fixtures::builtin_chain("split");
    CHECK(reachability_probability(split, decompose(split)) == Vector{0.5, 1.0, 0.0});

    ChainSpec spec;
    spec.states = 10;
    spec.rejecting_bsccs = 2;
    spec.seed = 4;
    const auto g = generate_chain(spec);
    const auto c = induce_chain(g.model, g.policy);
    const auto p = decompose(c);
    const Vector x = reachability_probability(c, p);
    const Vector px = multiply(c.p, x);
    for (std::size_t s = 0; s < c.size(); ++s) {
        CHECK(std::abs(px[s] - x[s]) <= 1e-9); // harmonic on every state
        CHECK(x[s] >= -1e-12);
        CHECK(x[s] <= 1 + 1e-12);
    }
    const std::size_t runs = 100000;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < runs; ++i) {
        const auto t = sample_trajectory(c, p, c.initial, 21, i, 100000);
        REQUIRE(t.end == Trajectory::End::entered_bscc);
        if (p.bscc_accepting[t.bscc]) ++hits;
    }
    const double freq = static_cast<double>(hits) / runs;
    const double sigma = std::sqrt(x[c.initial] * (1 - x[c.initial]) / runs);
    CHECK(std::abs(freq - x[c.initial]) <= 3 * sigma + 1e-12);
}

TEST_CASE("trajectories follow positive-probability edges") {
    const auto c = fixtures::builtin_chain("loop2");
    const auto p = decompose(c);
    const auto t = sample_trajectory(c, p, 0, 1, 0, 50);
    CHECK(t.end == Trajectory::End::entered_bscc);
    CHECK(t.states.size() == 1);
    const auto split = fixtures::builtin_chain("split");
    const auto t2 = sample_trajectory(split, decompose(split), 0, 1, 0, 50);
    REQUIRE(t2.states.size() == 2);
    CHECK(split.p(t2.states[0], t2.states[1]) > 0.0);
}

TEST_CASE("null space") {
    const auto c = fixtures::ex1();
    const auto op = [&](double gamma) {
        const SurrogateReward r(gamma, 0.5);
        Matrix m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = (i == j ? 1.0 : 0.0) - r.discount(c.accepting[i]) * c.p(i, j);
        return m;
    };
    const auto ns = null_space(op(1.0));
    CHECK(ns.dim == 1);
    CHECK(ns.basis[0] == Vector{0.0, 0.0, 1.0});
    CHECK(null_space(op(0.9)).dim == 0);
    const auto zero = null_space(Matrix(3, 3));
    CHECK(zero.dim == 3);
    CHECK(zero.basis.size() == 3);

    Matrix rank_one(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) rank_one(i, j) = (i + 1.0) * (j + 2.0);
    const auto r1 = null_space(rank_one);
    CHECK(r1.dim == 2);
    for (const auto& v : r1.basis) {
        CHECK(norm_inf(v) == 1.0);
        CHECK(norm_inf(multiply(rank_one, v)) <= 1e-7 * rank_one.norm_inf());
    }
}

TEST_CASE("spectral radius estimate") {
    Matrix rotation(2, 2);
    rotation(0, 1) = 0.5;
    rotation(1, 0) = 0.5;
    CHECK(spectral_radius_estimate(rotation) == doctest::Approx(0.5).epsilon(1e-9));
    Matrix nilpotent(2, 2);
    nilpotent(0, 1) = 1.0;
    CHECK(spectral_radius_estimate(nilpotent) == 0.0);
    Matrix tri(2, 2);
    tri(0, 0) = 0.9;
    tri(0, 1) = 0.1;
    tri(1, 1) = 0.5;
    CHECK(spectral_radius_estimate(tri, 14) == doctest::Approx(0.9).epsilon(1e-3));
}
