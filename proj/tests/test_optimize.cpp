#include <doctest.h>

#include <cmath>

#include "symdyn/error.hpp"
#include "symdyn/optimize.hpp"

using namespace symdyn;

TEST_CASE("standard families") {
    const auto g1 = MarkovFamily::standard(Sft::named("golden"), 1);
    CHECK(g1.keys == std::vector<std::string>{"00"});
    const auto g2 = MarkovFamily::standard(Sft::named("golden"), 2);
    CHECK(g2.keys == std::vector<std::string>{"000", "100"});
    const auto f2 = MarkovFamily::standard(Sft::full_shift(2), 1);
    CHECK(f2.keys == std::vector<std::string>{"00", "11"});
    CHECK_THROWS_AS(MarkovFamily::standard(Sft::named("period2"), 1), InvalidArgument);
    CHECK_THROWS_AS(g1.params({0.1, 0.2}), InvalidArgument);
}

TEST_CASE("targets") {
    CHECK(parse_markov_target("asc") == MarkovTarget::Asc);
    CHECK(to_string(parse_markov_target("int")) == "int");
    CHECK_THROWS_AS(parse_markov_target("max"), InvalidArgument);
    const auto f2 = MarkovFamily::standard(Sft::full_shift(2), 1);
    CHECK(evaluate_target(f2, MarkovTarget::Entropy, {1.0, 1.0}) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("one-parameter golden mean maxima") {
    const auto family = MarkovFamily::standard(Sft::named("golden"), 1);
    const double phi = (1 + std::sqrt(5.0)) / 2;
    const auto e = optimize(family, MarkovTarget::Entropy);
    REQUIRE_FALSE(e.maxima.empty());
    CHECK(e.maxima[0].point[0] == doctest::Approx(1 / phi).epsilon(1e-4));
    CHECK(e.maxima[0].value == doctest::Approx(std::log(phi)).epsilon(1e-10));
    CHECK(e.method == "grid+golden-section");
    const auto a = optimize(family, MarkovTarget::Asc);
    CHECK(a.maxima[0].point[0] == doctest::Approx(0.533).epsilon(2e-3));
    const auto i = optimize(family, MarkovTarget::Int);
    CHECK(i.maxima[0].point[0] == doctest::Approx(0.216).epsilon(2e-3));
    CHECK(i.maxima[0].value == doctest::Approx(0.124).epsilon(1e-3));
}

TEST_CASE("full shift intricacy has symmetric maxima including boundary ones") {
    OptimizeOptions options;
    options.grid = 0.05;
    const auto r = optimize(MarkovFamily::standard(Sft::full_shift(2), 1), MarkovTarget::Int, options);
    REQUIRE(r.maxima.size() >= 3);
    auto first = r.maxima[0], second = r.maxima[1];
    CHECK(first.value == doctest::Approx(second.value).epsilon(1e-6));
    if (second.point < first.point) std::swap(first, second);
    CHECK(first.point[0] == 0.0);
    CHECK(second.point[1] == 0.0);
    CHECK(first.point[1] == doctest::Approx(second.point[0]).epsilon(1e-4));
    CHECK(r.maxima[2].value < first.value - 1e-3);
    for (std::size_t k = 1; k < r.maxima.size(); ++k) CHECK(r.maxima[k - 1].value >= r.maxima[k].value);
}

TEST_CASE("optimizer is deterministic") {
    OptimizeOptions options;
    options.grid = 0.1;
    options.jitter = 0.3;
    options.seed = 42;
    const auto family = MarkovFamily::standard(Sft::named("golden"), 2);
    options.threads = 1;
    const auto a = optimize(family, MarkovTarget::Asc, options);
    options.threads = 4;
    const auto b = optimize(family, MarkovTarget::Asc, options);
    REQUIRE(a.maxima.size() == b.maxima.size());
    for (std::size_t k = 0; k < a.maxima.size(); ++k) {
        CHECK(a.maxima[k].point == b.maxima[k].point);
        CHECK(a.maxima[k].value == b.maxima[k].value);
    }
    options.grid = 0.0;
    CHECK_THROWS_AS(optimize(family, MarkovTarget::Asc, options), InvalidArgument);
    options.grid = 1e-4;
    CHECK_THROWS_AS(optimize(family, MarkovTarget::Asc, options), ResourceError);
}
