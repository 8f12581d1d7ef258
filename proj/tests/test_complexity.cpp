#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "symdyn/complexity.hpp"
#include "symdyn/error.hpp"
#include "symdyn/generators.hpp"

using namespace symdyn;
using testing::bin;
using testing::from_raw;

namespace {

std::size_t brute_nonrepetitive(const std::string& s, std::size_t n) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i + n <= s.size(); ++i)
        if (!seen.insert(s.substr(i, n)).second) return i;
    return 0;
}

}  // namespace

TEST_CASE("eventual periodicity") {
    const auto v = eventual_periodicity_test(named_sequence("periodic", 200, "0010111"));
    CHECK(v.eventually_periodic);
    CHECK(v.witness.value() <= 7);
    const auto f = eventual_periodicity_test(named_sequence("fibonacci", 400), 50);
    CHECK_FALSE(f.eventually_periodic);
    CHECK(f.n_max == 50);
    CHECK(eventual_periodicity_test(bin("0000000000000000000011")).eventually_periodic);
}

TEST_CASE("palindrome complexity matches the oracle") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto raw = testing::random_raw(rng, 30, 2);
        const auto pal = palindrome_complexity(from_raw(raw), 10);
        for (std::size_t n = 1; n <= 10; ++n) REQUIRE(pal[n - 1] == oracle::palindromes_of_length(raw, n));
    }
    const auto fib = palindrome_complexity(named_sequence("fibonacci", 2000), 20);
    for (std::size_t n = 1; n <= 20; ++n) CHECK(fib[n - 1] == (n % 2 ? 2U : 1U));
}

TEST_CASE("palindrome inequality") {
    const auto fib = palindrome_inequality_check(named_sequence("fibonacci", 2000), 30);
    CHECK(fib.verdict == InequalityVerdict::Holds);
    CHECK(fib.equality_everywhere);
    const auto morse = palindrome_inequality_check(named_sequence("morse", 2048), 30);
    CHECK(morse.verdict == InequalityVerdict::Holds);
    CHECK_FALSE(morse.equality_everywhere);
    const auto skew = palindrome_inequality_check(bin("0011011011011011"), 5);
    CHECK(skew.verdict == InequalityVerdict::Inapplicable);
    CHECK(skew.unreversed_factor.has_value());
    CHECK_THROWS_AS(palindrome_inequality_check(bin("0101"), 4), InvalidArgument);
}

TEST_CASE("palindromic closure matches exhaustive search") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto raw = testing::random_raw(rng, trial % 9, 2 + trial % 2);
        const Word w = from_raw(raw, Alphabet::from_labels("012"));
        REQUIRE(oracle::raw(palindromic_closure(w)) == oracle::palindromic_closure(raw, 3));
    }
    CHECK(is_standard_episturmian_prefix(named_sequence("fibonacci", 300)));
    CHECK_FALSE(is_standard_episturmian_prefix(bin("0110")));
}

TEST_CASE("Thue-Morse closed form") {
    const Word tm = from_raw(oracle::thue_morse(1 << 14));
    CHECK(morse_complexity_closed_form(1) == 2);
    CHECK(morse_complexity_closed_form(2) == 4);
    for (std::uint64_t n = 3; n <= 64; ++n) REQUIRE(morse_complexity_closed_form(n) == count_factors(tm, n));
    // p(n+1) - p(n) is 2^r or 2^(r+1): the closed form stays increasing
    for (std::uint64_t n = 3; n < 5000; ++n) {
        const auto d = morse_complexity_closed_form(n + 1) - morse_complexity_closed_form(n);
        REQUIRE(std::has_single_bit(d));
    }
}

TEST_CASE("nonrepetitive complexity") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto raw = testing::random_raw(rng, 60, 2);
        const Word w = from_raw(raw);
        for (std::size_t n = 1; n <= 5; ++n) {
            const auto expected = brute_nonrepetitive(raw, n);
            REQUIRE(expected > 0);
            REQUIRE(nonrepetitive_complexity(w, n) == expected);
            REQUIRE(nonrepetitive_complexity(w, n) <= count_factors(w, n));
        }
    }
    CHECK_THROWS_AS(nonrepetitive_complexity(bin("0110"), 3), PartialResult);
    try {
        nonrepetitive_complexity(bin("0110"), 3);
    } catch (const PartialResult& e) {
        CHECK(e.lower_bound() == 2);
    }
    const auto gen = named_generator("fibonacci");
    CHECK(nonrepetitive_complexity(gen, 5, 4, 1 << 12) == nonrepetitive_complexity(gen(1 << 12), 5));
}

TEST_CASE("eulerian estimate") {
    const auto e = eulerian_entropy_estimate(named_sequence("morse", 4096), 2, 8);
    REQUIRE(e.ratios.size() == 7);
    double best = 0;
    for (std::size_t i = 0; i < e.n.size(); ++i) {
        CHECK(e.ratios[i] == doctest::Approx(std::log(static_cast<double>(nonrepetitive_complexity(named_sequence("morse", 4096), e.n[i]))) / e.n[i]));
        best = std::max(best, e.ratios[i]);
    }
    CHECK(e.estimate == best);
}

TEST_CASE("window and arithmetic complexity") {
    const Word w = bin("0100101001001");
    CHECK(window_complexity(w, 2) == 3);
    CHECK(window_complexity(w, 13) == 1);
    CHECK(arithmetic_complexity(w, 2, 1) == count_factors(w, 2));
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const auto raw = testing::random_raw(rng, 40, 2);
        std::set<std::string> seen;
        for (std::size_t d = 1; d <= 3; ++d)
            for (std::size_t i = 0; i + 3 * d < raw.size(); ++i) {
                std::string f;
                for (std::size_t j = 0; j < 4; ++j) f += raw[i + j * d];
                seen.insert(f);
            }
        REQUIRE(arithmetic_complexity(from_raw(raw), 4, 3) == seen.size());
    }
    const Word tm = named_sequence("morse", 4096);
    for (std::size_t k = 1; k <= 3; ++k) CHECK(arithmetic_complexity(tm, 3, k) >= count_factors(tm, 3));
}

TEST_CASE("maximal pattern complexity") {
    const Word fib = named_sequence("fibonacci", 2000);
    CHECK(pattern_factor_count(fib, {0, 1, 2}) == 4);
    for (std::size_t k = 1; k <= 4; ++k) {
        const auto r = maximal_pattern_complexity_lb(fib, k, 20);
        CHECK(r.value == 2 * k);
        CHECK(pattern_factor_count(fib, r.best_pattern) == r.value);
        CHECK(r.best_pattern.front() == 0);
    }
    const auto tm = maximal_pattern_complexity_lb(named_sequence("morse", 4096), 3, 16);
    CHECK(tm.value == 8);
    CHECK_THROWS_AS(maximal_pattern_complexity_lb(bin("0101"), 2, 4), InvalidArgument);
}

TEST_CASE("inconstancy") {
    CHECK(inconstancy(bin("0000")) == doctest::Approx(1.0));
    CHECK(inconstancy(bin("0101010101")) == doctest::Approx(std::sqrt(2.0)));
    const Word tm = named_sequence("morse", 1 << 16);
    CHECK(inconstancy(tm) == doctest::Approx((1 + 2 * std::sqrt(2.0)) / 3).epsilon(1e-3));
    CHECK(inconstancy(bin("0101"), 2.0) == doctest::Approx(std::sqrt(5.0)));
    CHECK_THROWS_AS(inconstancy(Word::parse("012")), InvalidArgument);
}
