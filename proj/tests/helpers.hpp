#ifndef SYMDYN_TESTS_HELPERS_HPP
#define SYMDYN_TESTS_HELPERS_HPP

#include <random>
#include <string>

#include "symdyn/words.hpp"

namespace testing {

inline symdyn::Word bin(std::string_view labels) { return symdyn::Word::parse(labels, symdyn::Alphabet::binary()); }

/// Word from raw symbol indices.
inline symdyn::Word from_raw(const std::string& raw, symdyn::AlphabetPtr alphabet = symdyn::Alphabet::binary()) {
    return symdyn::Word(std::move(alphabet), std::vector<symdyn::Symbol>(raw.begin(), raw.end()));
}

inline std::string random_raw(std::mt19937_64& rng, std::size_t length, int r) {
    std::uniform_int_distribution<int> d(0, r - 1);
    std::string s(length, '\0');
    for (auto& c : s) c = static_cast<char>(d(rng));
    return s;
}

}  // namespace testing

#endif
