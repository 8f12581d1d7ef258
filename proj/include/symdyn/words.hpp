#ifndef SYMDYN_WORDS_HPP
#define SYMDYN_WORDS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symdyn {

/// Symbol index into an Alphabet. Alphabets are capped at 256 labels so a
/// word's data can be viewed as raw bytes for hashing.
using Symbol = std::uint8_t;

inline constexpr std::size_t kMaxAlphabetSize = 256;

/// Ordered set of distinct single-codepoint labels.
class Alphabet {
public:
    explicit Alphabet(std::vector<char32_t> labels);

    /// Labels given as a UTF-8 string, one codepoint per label ("01", "abc").
    static std::shared_ptr<const Alphabet> from_labels(std::string_view utf8);
    static std::shared_ptr<const Alphabet> binary();

    std::size_t size() const noexcept { return labels_.size(); }
    char32_t label(Symbol s) const { return labels_.at(s); }
    std::optional<Symbol> index_of(char32_t label) const noexcept;
    const std::vector<char32_t>& labels() const noexcept { return labels_; }
    std::string to_utf8() const;

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.labels_ == b.labels_; }

private:
    std::vector<char32_t> labels_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

/// Finite word over an alphabet. Immutable after construction.
class Word {
public:
    /// Empty word over {0,1}.
    Word();
    Word(AlphabetPtr alphabet, std::vector<Symbol> data);

    /// Parses labels against a known alphabet; throws InvalidArgument on an
    /// unknown label.
    static Word parse(std::string_view utf8, AlphabetPtr alphabet);
    /// Parses labels and infers the alphabet as the sorted distinct labels.
    static Word parse(std::string_view utf8);

    const Alphabet& alphabet() const noexcept { return *alphabet_; }
    const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    Symbol operator[](std::size_t i) const noexcept { return data_[i]; }
    std::span<const Symbol> symbols() const noexcept { return data_; }

    /// Symbol indices as raw bytes. Suitable as a hash key for factors.
    std::string_view bytes() const noexcept;
    std::string_view bytes(std::size_t pos, std::size_t len) const noexcept;

    Word substr(std::size_t pos, std::size_t len) const;
    Word prefix(std::size_t len) const { return substr(0, len); }
    std::string to_string() const;

    friend bool operator==(const Word& a, const Word& b);
    friend bool operator<(const Word& a, const Word& b);

private:
    AlphabetPtr alphabet_;
    std::vector<Symbol> data_;
};

/// Produces a prefix of a fixed infinite sequence of at least the given length.
using WordGenerator = std::function<Word(std::size_t)>;

/// Distinct factors of one length, in first-occurrence order.
struct FactorSet {
    std::size_t n = 0;
    std::vector<Word> factors;
    /// Set when n exceeded the word length; factors is then empty.
    bool window_exceeds_word = false;

    std::size_t count() const noexcept { return factors.size(); }
    bool contains(const Word& w) const;
};

FactorSet factors(const Word& w, std::size_t n);

/// p(n) without materialising the factors. Returns 0 when n > |w|.
std::size_t count_factors(const Word& w, std::size_t n);

/// [p(1), ..., p(n_max)].
std::vector<std::size_t> complexity_profile(const Word& w, std::size_t n_max);

Word reversal(const Word& w);
bool is_palindrome(const Word& w);

/// Distinct palindromic factors ordered by first completed occurrence; the
/// empty word comes first when include_empty is set.
std::vector<Word> palindromic_factors(const Word& w, bool include_empty = true);

/// Number of distinct palindromic factors, counting the empty word.
std::size_t palindrome_count(const Word& w);

/// True when w has |w|+1 distinct palindromic factors (empty word included).
bool is_rich(const Word& w);

/// Richness via the prefix characterisation: every prefix has a palindromic
/// suffix occurring exactly once in that prefix. Quadratic per prefix; meant
/// for cross-checking is_rich on short words.
bool is_rich_by_prefix_test(const Word& w);

/// Length of the longest rich prefix of w.
std::size_t longest_rich_prefix(const Word& w);

/// Binary words only: for every n <= n_max, the number of 1s over n-factors
/// varies by at most one. Throws InvalidArgument for other alphabets.
bool is_balanced(const Word& w, std::size_t n_max);

struct BlockFrequency {
    Word block;
    double frequency;
};

/// Empirical frequencies over the |w|-k+1 windows, first-occurrence order.
std::vector<BlockFrequency> block_frequencies(const Word& w, std::size_t k);

/// Frequency of one block among the k-windows of w (0 when absent).
double block_frequency(const Word& w, const Word& block);

/// Result of evaluating a prefix statistic with the doubling rule: compute on
/// prefixes of length L and 2L and accept once both agree.
template <class T>
struct StablePrefixResult {
    T value;
    std::size_t prefix_length = 0;
    bool stable = false;
};

template <class F>
auto evaluate_on_stable_prefix(const WordGenerator& gen, std::size_t initial_length,
                               std::size_t max_length, F&& statistic)
    -> StablePrefixResult<decltype(statistic(std::declval<const Word&>()))> {
    using T = decltype(statistic(std::declval<const Word&>()));
    std::size_t len = initial_length == 0 ? 1 : initial_length;
    T current = statistic(gen(len));
    while (2 * len <= max_length) {
        T doubled = statistic(gen(2 * len));
        if (doubled == current) return {std::move(current), len, true};
        current = std::move(doubled);
        len *= 2;
    }
    return {std::move(current), len, false};
}

namespace detail {
std::string utf8_encode(char32_t cp);
/// Decodes UTF-8 into codepoints; throws InvalidArgument on malformed input.
std::vector<char32_t> utf8_decode(std::string_view s);
}  // namespace detail

}  // namespace symdyn

#endif
