#ifndef SYMDYN_COMPLEXITY_HPP
#define SYMDYN_COMPLEXITY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/words.hpp"

namespace symdyn {

/// One measure evaluated over a range of n.
struct ComplexityReport {
    std::string measure;
    std::vector<std::size_t> n;
    std::vector<double> values;
    std::size_t prefix_length = 0;
    bool stable = false;
};

struct PeriodicityVerdict {
    bool eventually_periodic = false;
    /// Least n with p(n) <= n, when one was found.
    std::optional<std::size_t> witness;
    std::size_t n_max = 0;
};

/// Searches n = 1..n_max for p(n) <= n. The default bound |w|/4 keeps every
/// tested length well inside the prefix.
PeriodicityVerdict eventual_periodicity_test(const Word& w, std::optional<std::size_t> n_max = std::nullopt);

/// [Pal(1), ..., Pal(n_max)]: distinct palindromic factors of each length.
std::vector<std::size_t> palindrome_complexity(const Word& w, std::size_t n_max);

enum class InequalityVerdict { Holds, Violated, Inapplicable };

struct PalindromeInequalityResult {
    InequalityVerdict verdict = InequalityVerdict::Holds;
    /// First n violating Pal(n) + Pal(n+1) <= p(n+1) - p(n) + 2.
    std::optional<std::size_t> first_violation;
    /// Set when equality held for every tested n.
    bool equality_everywhere = false;
    /// Factor whose reversal is missing (Inapplicable only).
    std::optional<Word> unreversed_factor;
};

/// Tests n = 1..n_max-1 after checking that the factors of length <= n_max
/// are closed under reversal. Needs n_max < |w|.
PalindromeInequalityResult palindrome_inequality_check(const Word& w, std::size_t n_max);

/// Shortest palindrome having w as a prefix.
Word palindromic_closure(const Word& w);

/// The palindromic closure of every prefix of w agrees with w wherever both
/// are defined.
bool is_standard_episturmian_prefix(const Word& w);

/// Factor complexity of the Thue-Morse sequence, n >= 1.
std::uint64_t morse_complexity_closed_form(std::uint64_t n);

/// P^N(n): the largest m such that the first m windows of length n are
/// pairwise distinct. Throws PartialResult (with the lower bound |w|-n+1)
/// when no window repeats inside w.
std::size_t nonrepetitive_complexity(const Word& w, std::size_t n);

/// Same, extending the prefix through the generator (doubling) up to max_length.
std::size_t nonrepetitive_complexity(const WordGenerator& gen, std::size_t n, std::size_t initial_length,
                                     std::size_t max_length);

struct EulerianEstimate {
    std::vector<std::size_t> n;
    std::vector<double> ratios;  // log P^N(n) / n
    double estimate = 0.0;       // max of ratios
};

EulerianEstimate eulerian_entropy_estimate(const Word& w, std::size_t n_min, std::size_t n_max);

/// Distinct aligned blocks w[kn .. (k+1)n-1].
std::size_t window_complexity(const Word& w, std::size_t n);

/// Distinct words w_i w_{i+d} ... w_{i+(n-1)d} over all starts i and steps 1 <= d <= k_max.
std::size_t arithmetic_complexity(const Word& w, std::size_t n, std::size_t k_max);

struct MaximalPatternResult {
    std::size_t value = 0;  ///< max |F_tau| over the searched patterns
    std::vector<std::size_t> best_pattern;
    std::uint64_t patterns_tested = 0;
    std::size_t window = 0;
};

/// Maximum of |F_tau(w)| over patterns 0 = tau(0) < ... < tau(k-1) <= window.
/// A lower bound for the maximal pattern complexity.
MaximalPatternResult maximal_pattern_complexity_lb(const Word& w, std::size_t k, std::size_t window);

/// |F_tau(w)| for a single pattern.
std::size_t pattern_factor_count(const Word& w, const std::vector<std::size_t>& tau);

/// Binary word read as heights {0, h}: 1 + (sqrt(h^2+1) - 1)(mu[01] + mu[10]).
double inconstancy(const Word& w, double h = 1.0);

}  // namespace symdyn

#endif
