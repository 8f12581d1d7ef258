#ifndef SYMDYN_SUBSHIFT_HPP
#define SYMDYN_SUBSHIFT_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symdyn/bigint.hpp"
#include "symdyn/words.hpp"

namespace symdyn {

using AdjacencyMatrix = std::vector<std::vector<std::uint8_t>>;

/// Shift of finite type presented as a vertex shift on "states". Without
/// recoding a state is a single symbol; an SFT given by forbidden words of
/// length m is recoded onto its allowed (m-1)-blocks, and each state keeps the
/// original block it stands for. Stranded states are trimmed on
/// construction, so every finite path extends in both directions.
class Sft {
public:
    /// Memory-1 SFT whose states are the alphabet's symbols.
    static Sft from_matrix(AlphabetPtr alphabet, const AdjacencyMatrix& matrix);
    static Sft from_forbidden_words(AlphabetPtr alphabet, const std::vector<Word>& forbidden);
    static Sft full_shift(std::size_t r);
    /// golden | full2 | full3 | period2 | figI | figII
    static Sft named(std::string_view name);
    /// {"alphabet":[...],"matrix":[[...]]}, {"alphabet":[...],"forbidden":[...]}, or the
    /// recoded form written by to_json ("block_length", "states", "state_matrix").
    static Sft from_json(std::string_view json_text);
    /// Built-in name, or inline JSON when the text starts with '{'.
    static Sft resolve(std::string_view name_or_json);

    const Alphabet& alphabet() const noexcept { return *alphabet_; }
    const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }
    std::size_t state_count() const noexcept { return adjacency_.size(); }
    const AdjacencyMatrix& adjacency() const noexcept { return adjacency_; }
    bool allowed(std::size_t from, std::size_t to) const { return adjacency_[from][to] != 0; }

    /// Original block represented by a state.
    const Word& state_label(std::size_t state) const { return labels_.at(state); }
    Symbol first_symbol(std::size_t state) const { return labels_.at(state)[0]; }
    /// Length of the blocks the states stand for (1 when not recoded).
    std::size_t block_length() const noexcept { return block_length_; }
    bool is_memory_one() const noexcept { return block_length_ == 1; }

    std::string to_json() const;

private:
    Sft(AlphabetPtr alphabet, std::vector<Word> labels, AdjacencyMatrix adjacency, std::size_t block_length);

    AlphabetPtr alphabet_;
    std::vector<Word> labels_;
    AdjacencyMatrix adjacency_;
    std::size_t block_length_ = 1;
};

/// Strictly increasing subset of {0, ..., horizon-1}.
class CoordinateSet {
public:
    CoordinateSet(std::size_t horizon, std::vector<std::size_t> members);
    /// Bit i of mask selects coordinate i.
    static CoordinateSet from_mask(std::size_t horizon, std::uint64_t mask);
    static CoordinateSet interval(std::size_t horizon, std::size_t start, std::size_t length);

    std::size_t horizon() const noexcept { return horizon_; }
    const std::vector<std::size_t>& members() const noexcept { return members_; }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(std::size_t i) const;
    CoordinateSet complement() const;
    /// Maximal runs of consecutive members as (start, length).
    std::vector<std::pair<std::size_t, std::size_t>> intervals() const;

private:
    std::size_t horizon_;
    std::vector<std::size_t> members_;
};

/// |L_n|, by transfer-matrix dynamic programming.
BigInt count_blocks(const Sft& x, std::size_t n);

/// All allowed n-blocks over the original alphabet, in lexicographic order.
FactorSet enumerate_blocks(const Sft& x, std::size_t n);

enum class PatternMethod {
    Auto,             ///< IntervalProduct when available, else Transfer
    IntervalProduct,  ///< product of interval counts; memory-1 with M^2 > 0 only
    Transfer,         ///< subset-construction dynamic programming
    Enumerate,        ///< enumerate, project, deduplicate (budgeted)
};

/// Word-extension budget of the enumeration method.
inline constexpr double kEnumerationBudget = 1e8;

/// N(S): number of distinct restrictions to S of allowed words on
/// {0, ..., max S}. N(empty) = 1.
BigInt pattern_count(const Sft& x, const CoordinateSet& s, PatternMethod method = PatternMethod::Auto);

/// Reuses one enumeration of the allowed words on {0, ..., horizon-1} for many
/// coordinate sets; the enumeration oracle behind PatternMethod::Enumerate.
class PatternEnumerator {
public:
    PatternEnumerator(const Sft& x, std::size_t horizon);
    std::size_t count(const CoordinateSet& s);
    std::size_t word_count() const noexcept { return words_.size() / std::max<std::size_t>(horizon_, 1); }

private:
    std::size_t horizon_;
    std::size_t radix_;
    std::vector<Symbol> words_;  // row-major, horizon_ symbols per word
    std::vector<std::uint32_t> stamp_;
    std::uint32_t generation_ = 0;
};

/// Natural log of the spectral radius of the adjacency matrix.
double entropy(const Sft& x);

/// All entries of M^k strictly positive.
bool is_power_positive(const Sft& x, std::size_t k);

struct DeBruijnGraph {
    std::size_t n = 0;
    std::vector<Word> vertices;                          // allowed (n-1)-blocks
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // one per allowed n-block
};

DeBruijnGraph de_bruijn_graph(const Sft& x, std::size_t n);

/// Strong connectivity; false for a graph without vertices.
bool is_irreducible(const DeBruijnGraph& g);

}  // namespace symdyn

#endif
