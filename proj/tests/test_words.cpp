#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "symdyn/error.hpp"
#include "symdyn/sequence_io.hpp"
#include "symdyn/words.hpp"

using namespace symdyn;
using testing::bin;
using testing::from_raw;

TEST_CASE("parsing infers a sorted alphabet and round-trips labels") {
    const Word w = Word::parse("abca");
    CHECK(w.alphabet().to_utf8() == "abc");
    CHECK(w.size() == 4);
    CHECK(w[2] == 2);
    CHECK(w.to_string() == "abca");
    CHECK(Word::parse("αβα").alphabet().size() == 2);
    CHECK_THROWS_AS(Word::parse("012", Alphabet::binary()), InvalidArgument);
    CHECK_THROWS_AS(Alphabet::from_labels("00"), InvalidArgument);
}

TEST_CASE("factor counts agree with the set oracle on random words") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int r = 2 + trial % 3;
        std::string labels;
        for (int i = 0; i < r; ++i) labels += static_cast<char>('0' + i);
        const auto raw = testing::random_raw(rng, 1 + trial % 40, r);
        const Word w = from_raw(raw, Alphabet::from_labels(labels));
        for (std::size_t n = 1; n <= w.size(); ++n) {
            const auto expected = oracle::factor_set(raw, n);
            REQUIRE(count_factors(w, n) == expected.size());
            const auto fs = factors(w, n);
            REQUIRE(fs.count() == expected.size());
            for (const auto& f : fs.factors) REQUIRE(expected.contains(oracle::raw(f)));
        }
        CHECK(factors(w, w.size() + 1).window_exceeds_word);
    }
}

TEST_CASE("palindromic factors match the exhaustive oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const auto raw = testing::random_raw(rng, trial % 25, 2 + trial % 2);
        const Word w = from_raw(raw, Alphabet::from_labels("012"));
        const auto expected = oracle::palindromic_factors(raw);
        REQUIRE(palindrome_count(w) == expected.size());
        const auto got = palindromic_factors(w);
        REQUIRE(got.size() == expected.size());
        for (const auto& p : got) REQUIRE(expected.contains(oracle::raw(p)));
        REQUIRE(is_rich(w) == (expected.size() == raw.size() + 1));
        REQUIRE(is_rich(w) == is_rich_by_prefix_test(w));
    }
}

TEST_CASE("longest rich prefix") {
    CHECK(longest_rich_prefix(bin("0101")) == 4);
    // 00101100 is the shortest binary non-rich word
    const Word w = bin("00101100");
    CHECK_FALSE(is_rich(w));
    CHECK(longest_rich_prefix(w) == 7);
}

TEST_CASE("complexity profile and reversal") {
    const Word w = bin("0100101001001");
    const auto p = complexity_profile(w, 5);
    CHECK(p == std::vector<std::size_t>{2, 3, 4, 5, 6});
    CHECK_THROWS_AS(complexity_profile(w, 14), InvalidArgument);
    CHECK(reversal(bin("0011")).to_string() == "1100");
    CHECK(is_palindrome(bin("01010")));
    CHECK_FALSE(is_palindrome(bin("01")));
}

TEST_CASE("balance") {
    CHECK(is_balanced(bin("0100101001001"), 13));
    CHECK_FALSE(is_balanced(bin("0011"), 4));
    CHECK_THROWS_AS(is_balanced(Word::parse("012"), 2), InvalidArgument);
}

TEST_CASE("block frequencies sum to one") {
    const Word w = from_raw(oracle::thue_morse(4096));
    double total = 0.0;
    for (const auto& b : block_frequencies(w, 3)) total += b.frequency;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(block_frequency(w, bin("11")) == doctest::Approx(1.0 / 6).epsilon(0.01));
    CHECK(block_frequency(w, bin("111")) == 0.0);
}

TEST_CASE("stable prefix doubling") {
    const WordGenerator gen = [](std::size_t n) { return from_raw(oracle::fibonacci(n)); };
    const auto r = evaluate_on_stable_prefix(gen, 16, 1024, [](const Word& w) { return count_factors(w, 5); });
    CHECK(r.stable);
    CHECK(r.value == 6);
    const auto never = evaluate_on_stable_prefix(gen, 16, 64, [](const Word& w) { return w.size(); });
    CHECK_FALSE(never.stable);
}

TEST_CASE("sequence files") {
    std::istringstream in("#alphabet:ab\nabba\n\nbb\r\n");
    const auto seqs = read_sequences(in);
    REQUIRE(seqs.size() == 2);
    CHECK(seqs[1].alphabet().to_utf8() == "ab");
    CHECK(seqs[1].to_string() == "bb");
    std::ostringstream out;
    write_sequence(out, seqs[0], true);
    std::istringstream back(out.str());
    CHECK(read_sequences(back).front() == seqs[0]);
    std::istringstream bad("#nonsense\n01\n");
    CHECK_THROWS_AS(read_sequences(bad), InvalidArgument);
}
