#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "symdyn/error.hpp"
#include "symdyn/markov.hpp"

using namespace symdyn;

TEST_CASE("stationary vector agrees with the eigenvector oracle") {
    for (double p : {0.1, 0.5, 0.618, 0.9}) {
        const auto m = golden_mean_1step(p);
        const auto pi = oracle::stationary(m.transition());
        for (std::size_t i = 0; i < pi.size(); ++i) CHECK(m.stationary()[i] == doctest::Approx(pi[i]).epsilon(1e-12));
        CHECK(m.stationarity_residual() < 1e-12);
    }
    const auto degenerate = golden_mean_1step(1.0);
    CHECK(degenerate.stationary()[0] == doctest::Approx(1.0));
    CHECK(entropy_rate(degenerate) == doctest::Approx(0.0));
}

TEST_CASE("Parry measure attains the topological entropy") {
    const double phi = (1 + std::sqrt(5.0)) / 2;
    const auto m = golden_mean_1step(1 / phi);
    CHECK(entropy_rate(m) == doctest::Approx(std::log(phi)).epsilon(1e-12));
    CHECK(m.stationary()[0] == doctest::Approx(phi * phi / (1 + phi * phi)).epsilon(1e-12));
}

TEST_CASE("validation") {
    const Sft g = Sft::named("golden");
    CHECK_THROWS_AS(MarkovMeasure(g, 1, {{0.5, 0.5}, {0.5, 0.5}}), InvalidArgument);
    CHECK_THROWS_AS(MarkovMeasure(g, 1, {{0.5, 0.6}, {1.0, 0.0}}), InvalidArgument);
    CHECK_THROWS_AS(MarkovMeasure(Sft::full_shift(2), 1, {{1.0, 0.0}, {0.0, 1.0}}), PreconditionError);
    CHECK_THROWS_AS(build_rstep(g, 1, {{"00", 1.5}}), InvalidArgument);
    CHECK_THROWS_AS(build_rstep(g, 1, {{"11", 0.5}}), InvalidArgument);
    CHECK_NOTHROW(build_rstep(g, 1, {{"11", 0.0}}));
    const auto params = parse_markov_params("p00=0.25,11=0.5");
    CHECK(params.at("00") == 0.25);
    CHECK(params.at("11") == 0.5);
    CHECK_THROWS_AS(parse_markov_params("p00"), InvalidArgument);
}

TEST_CASE("cylinders are a consistent probability") {
    const auto m = build_rstep(Sft::named("golden"), 2, {{"000", 0.3}, {"100", 0.7}});
    for (std::size_t n = 1; n <= 8; ++n) {
        double total = 0;
        for (const auto& w : enumerate_blocks(m.base(), n).factors) total += m.cylinder(w);
        REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(m.cylinder(testing::bin("11")) == 0.0);
    CHECK(m.cylinder(testing::bin("0")) + m.cylinder(testing::bin("1")) == doctest::Approx(1.0));
}

TEST_CASE("order-2 chain with matching rows equals the order-1 chain") {
    const auto one = golden_mean_1step(0.618);
    const auto two = build_rstep(Sft::named("golden"), 2, {{"000", 0.618}, {"100", 0.618}});
    CHECK(entropy_rate(two) == doctest::Approx(entropy_rate(one)).epsilon(1e-12));
    CHECK(asc_mu(two) == doctest::Approx(asc_mu(one)).epsilon(1e-12));
}

TEST_CASE("series agrees with oracle subset sums") {
    for (double p : {0.25, 0.618}) {
        const auto m = golden_mean_1step(p);
        for (std::size_t n = 1; n <= 7; ++n)
            REQUIRE(brute_asc_mu(m, n) == doctest::Approx(oracle::asc_cylinders(m.transition(), n)).epsilon(1e-12));
        CHECK(brute_asc_mu(m, 1) == doctest::Approx(marginal_entropy(m) / 2).epsilon(1e-12));
        CHECK(std::abs(brute_asc_mu(m, 12) - asc_mu(m)) < 0.02);
    }
    const auto f = build_rstep(Sft::full_shift(2), 1, {{"00", 0.3}, {"11", 0.8}});
    for (std::size_t n = 1; n <= 6; ++n)
        REQUIRE(brute_asc_mu(f, n) == doctest::Approx(oracle::asc_cylinders(f.transition(), n)).epsilon(1e-12));
}

TEST_CASE("Bernoulli measures have zero intricacy") {
    for (double p : {0.5, 0.2}) {
        const auto m = build_rstep(Sft::full_shift(2), 1, {{"00", p}, {"10", p}});
        const auto r = markov_intricacy(m);
        CHECK(std::abs(r.intricacy) < 1e-9);
        CHECK(r.asc == doctest::Approx(r.entropy / 2).epsilon(1e-12));
        CHECK(conditional_entropy_at_lag(m, 3) == doctest::Approx(marginal_entropy(m)).epsilon(1e-12));
    }
}

TEST_CASE("conditional entropies decrease towards the marginal") {
    const auto m = golden_mean_1step(0.4);
    CHECK(conditional_entropy_at_lag(m, 1) == doctest::Approx(entropy_rate(m)).epsilon(1e-12));
    for (std::size_t i = 1; i < 20; ++i)
        CHECK(conditional_entropy_at_lag(m, i) <= conditional_entropy_at_lag(m, i + 1) + 1e-12);
    CHECK(conditional_entropy_at_lag(m, 60) == doctest::Approx(marginal_entropy(m)).epsilon(1e-9));
    const auto r = markov_intricacy(m, 1e-12);
    CHECK(r.tail_bound < 1e-12);
    CHECK(r.intricacy == doctest::Approx(2 * r.asc - r.entropy).epsilon(1e-12));
}

TEST_CASE("states of recoded shifts") {
    const Sft x = Sft::from_forbidden_words(Alphabet::binary(), {testing::bin("111")});
    CHECK_THROWS_AS(markov_states(x, 1), InvalidArgument);
    CHECK(markov_states(x, 2).size() == 4);
    const auto m = build_rstep(x, 2, {});
    CHECK(m.stationarity_residual() < 1e-12);
    CHECK(entropy_rate(m) > 0);
}
