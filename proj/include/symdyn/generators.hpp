#ifndef SYMDYN_GENERATORS_HPP
#define SYMDYN_GENERATORS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symdyn/bigint.hpp"
#include "symdyn/words.hpp"

namespace symdyn {

/// Map symbol -> nonempty word, extended to words by concatenation.
class Substitution {
public:
    Substitution(AlphabetPtr alphabet, std::vector<std::vector<Symbol>> images);

    /// Images keyed by single-character labels; the alphabet is the sorted key set.
    static Substitution from_labels(const std::map<std::string, std::string>& images);

    const Alphabet& alphabet() const noexcept { return *alphabet_; }
    const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }
    const std::vector<Symbol>& image(Symbol s) const { return images_.at(s); }

    Word apply(const Word& w) const;

    /// Incidence matrix: entry (a, b) counts occurrences of a in the image of b.
    std::vector<std::vector<std::uint64_t>> incidence_matrix() const;

private:
    AlphabetPtr alphabet_;
    std::vector<std::vector<Symbol>> images_;
};

/// Prefix of length `length` of the fixed point grown from `seed`. The image
/// of the seed must start with the seed and have length at least 2.
Word fixed_point(const Substitution& s, Symbol seed, std::size_t length);

/// Smallest m <= m_max such that the m-th iterate of every symbol's image
/// contains every symbol; computed on letter sets.
std::optional<std::size_t> primitivity_exponent(const Substitution& s, std::size_t m_max);

bool is_primitive(const Substitution& s, std::size_t m_max);

/// Same question answered on powers of the incidence matrix.
bool is_primitive_by_matrix(const Substitution& s, std::size_t m_max);

/// Continued fraction [a0; a1, a2, ...]: a finite list of terms optionally
/// followed by a repeating period. Without a period the value is rational.
class ContinuedFraction {
public:
    ContinuedFraction(std::vector<std::int64_t> terms, std::vector<std::int64_t> period = {});

    /// Exact expansion of a nonnegative rational.
    static ContinuedFraction from_rational(const BigRational& x);

    /// "0,2,1,1" or "0,2;1" (terms after ';' repeat).
    static ContinuedFraction parse(std::string_view text);

    bool is_finite() const noexcept { return period_.empty(); }
    /// Number of terms (infinite expansions report max size_t).
    std::size_t length() const noexcept;
    std::int64_t term(std::size_t k) const;

    /// Convergent p_k / q_k.
    BigRational convergent(std::size_t k) const;
    /// Exact value; only for finite expansions.
    BigRational value() const;
    double approximate() const;

    const std::vector<std::int64_t>& terms() const noexcept { return terms_; }
    const std::vector<std::int64_t>& period() const noexcept { return period_; }

private:
    std::vector<std::int64_t> terms_;
    std::vector<std::int64_t> period_;
};

/// Real parameter known exactly: a rational (a double converts exactly) or
/// an infinite continued fraction bracketed by consecutive convergents.
class ExactReal {
public:
    static ExactReal from_double(double x);
    static ExactReal from_rational(BigRational x);
    static ExactReal from_continued_fraction(ContinuedFraction cf);

    bool is_exact() const noexcept { return !cf_; }
    /// Closed interval containing the value; the value is strictly inside
    /// when not exact. Level k uses convergents k and k+1.
    std::pair<BigRational, BigRational> bracket(std::size_t level) const;
    /// First level whose lower convergent denominator exceeds `denominator`.
    std::size_t level_for_denominator(const BigInt& denominator) const;
    double approximate() const;

private:
    std::optional<BigRational> exact_;
    std::optional<ContinuedFraction> cf_;
};

enum class MechanicalVariant { Lower, Upper };

/// Lower: floor(a(n+1)+b) - floor(an+b); upper: the same with ceilings.
/// Floors are exact: irrational slopes are refined until every floor is
/// determined. alpha and beta must lie in [0,1].
Word mechanical(const ExactReal& alpha, const ExactReal& beta, std::size_t length,
                MechanicalVariant variant);

/// Directive sequence (d1, d2, ...) with d1 >= 0 and dn > 0 for n > 1.
struct DirectiveSequence {
    std::vector<std::uint64_t> d;

    /// d1 = a1 - 1, dn = an for the continued fraction [0; a1, a2, ...].
    static DirectiveSequence from_continued_fraction(const ContinuedFraction& cf, std::size_t count);
    void validate() const;
};

/// s_{-1}, s_0, s_1, ..., s_N with s_n = s_{n-1}^{d_n} s_{n-2}.
std::vector<Word> standard_sequence_terms(const DirectiveSequence& d);

/// s_N, the last standard word of the directive sequence.
Word standard_sequence(const DirectiveSequence& d);

/// Prefix of the characteristic word of alpha = [0; a1, a2, ...], built as the
/// limit of standard words. Throws when a tail term is zero or when a finite
/// expansion runs out before the requested length.
Word characteristic_word(const ContinuedFraction& cf, std::size_t length);

/// fibonacci | morse | chacon | kolakoski | champernowne_binary | periodic.
/// `block` is the repeated word for "periodic" and ignored otherwise.
Word named_sequence(std::string_view name, std::size_t length, std::string_view block = {});

WordGenerator named_generator(std::string name, std::string block = {});

/// Serializable generator description; see generator_spec_from_json.
struct GeneratorSpec {
    enum class Kind { Named, Substitution, Mechanical, Characteristic, Standard };
    Kind kind = Kind::Named;
    std::string name;                              // Named
    std::string block;                             // Named periodic
    std::map<std::string, std::string> images;     // Substitution
    std::string seed;                              // Substitution
    std::optional<double> alpha;                   // Mechanical (float slope)
    std::optional<ContinuedFraction> cf;           // Mechanical / Characteristic
    double beta = 0.0;                             // Mechanical
    MechanicalVariant variant = MechanicalVariant::Lower;
    std::vector<std::uint64_t> directive;          // Standard
};

GeneratorSpec generator_spec_from_json(std::string_view json_text);
std::string generator_spec_to_json(const GeneratorSpec& spec);
WordGenerator make_generator(const GeneratorSpec& spec);

}  // namespace symdyn

#endif
