#include "symdyn/complexity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "palindrome_tree.hpp"
#include "symdyn/error.hpp"

namespace symdyn {

namespace {

// Counts distinct projections of w onto a pattern; reuses its stamp table.
class PatternCounter {
public:
    explicit PatternCounter(const Word& w) : w_(w), radix_(w.alphabet().size()) {}

    std::size_t count(const std::vector<std::size_t>& tau) {
        const std::size_t span = tau.back() + 1;
        if (span > w_.size()) return 0;
        const std::size_t windows = w_.size() - span + 1;
        const auto s = w_.symbols();
        const double space = std::pow(static_cast<double>(radix_), static_cast<double>(tau.size()));
        auto key_at = [&](std::size_t i) {
            std::uint64_t key = 0;
            for (std::size_t t : tau) key = key * radix_ + s[i + t];
            return key;
        };
        if (space <= static_cast<double>(1U << 22)) {
            if (stamp_.size() < static_cast<std::size_t>(space)) stamp_.assign(static_cast<std::size_t>(space), 0);
            if (++generation_ == 0) {
                std::fill(stamp_.begin(), stamp_.end(), 0);
                generation_ = 1;
            }
            std::size_t distinct = 0;
            for (std::size_t i = 0; i < windows; ++i) {
                auto& slot = stamp_[key_at(i)];
                if (slot != generation_) {
                    slot = generation_;
                    ++distinct;
                }
            }
            return distinct;
        }
        if (space < 1.8e19) {
            std::vector<std::uint64_t> keys(windows);
            for (std::size_t i = 0; i < windows; ++i) keys[i] = key_at(i);
            std::sort(keys.begin(), keys.end());
            return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
        }
        std::unordered_set<std::string> seen;
        std::string key(tau.size(), '\0');
        for (std::size_t i = 0; i < windows; ++i) {
            for (std::size_t j = 0; j < tau.size(); ++j) key[j] = static_cast<char>(s[i + tau[j]]);
            seen.insert(key);
        }
        return seen.size();
    }

private:
    const Word& w_;
    std::size_t radix_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t generation_ = 0;
};

}  // namespace

PeriodicityVerdict eventual_periodicity_test(const Word& w, std::optional<std::size_t> n_max) {
    if (w.size() < 2) throw InvalidArgument("eventual periodicity test needs |w| >= 2");
    PeriodicityVerdict out;
    out.n_max = std::min(n_max.value_or(std::max<std::size_t>(1, w.size() / 4)), w.size());
    for (std::size_t n = 1; n <= out.n_max; ++n) {
        if (count_factors(w, n) <= n) {
            out.eventually_periodic = true;
            out.witness = n;
            break;
        }
    }
    return out;
}

std::vector<std::size_t> palindrome_complexity(const Word& w, std::size_t n_max) {
    if (n_max > w.size()) throw InvalidArgument("n_max exceeds word length");
    std::vector<std::size_t> out(n_max, 0);
    for (auto [len, end] : detail::PalindromeTree(w.symbols()).palindromes())
        if (len <= n_max) ++out[len - 1];
    return out;
}

PalindromeInequalityResult palindrome_inequality_check(const Word& w, std::size_t n_max) {
    if (n_max == 0 || n_max >= w.size()) throw InvalidArgument("palindrome inequality needs 1 <= n_max < |w|");
    PalindromeInequalityResult out;
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::unordered_set<std::string_view> seen;
        for (std::size_t i = 0; i + n <= w.size(); ++i) seen.insert(w.bytes(i, n));
        for (auto f : seen) {
            std::string rev(f.rbegin(), f.rend());
            if (!seen.contains(rev)) {
                out.verdict = InequalityVerdict::Inapplicable;
                out.unreversed_factor = Word(w.alphabet_ptr(), std::vector<Symbol>(f.begin(), f.end()));
                return out;
            }
        }
    }
    const auto pal = palindrome_complexity(w, n_max);
    const auto p = complexity_profile(w, n_max);
    out.equality_everywhere = true;
    for (std::size_t n = 1; n < n_max; ++n) {
        const long lhs = static_cast<long>(pal[n - 1] + pal[n]);
        const long rhs = static_cast<long>(p[n]) - static_cast<long>(p[n - 1]) + 2;
        if (lhs > rhs && !out.first_violation) {
            out.verdict = InequalityVerdict::Violated;
            out.first_violation = n;
        }
        if (lhs != rhs) out.equality_everywhere = false;
    }
    return out;
}

Word palindromic_closure(const Word& w) {
    if (w.empty()) return w;
    const detail::PalindromeTree tree(w.symbols());
    const std::size_t head = w.size() - tree.longest_suffix_palindrome(w.size() - 1);
    std::vector<Symbol> out(w.symbols().begin(), w.symbols().end());
    for (std::size_t i = head; i-- > 0;) out.push_back(w[i]);
    return Word(w.alphabet_ptr(), std::move(out));
}

bool is_standard_episturmian_prefix(const Word& w) {
    const detail::PalindromeTree tree(w.symbols());
    for (std::size_t len = 1; len <= w.size(); ++len) {
        const std::size_t head = len - tree.longest_suffix_palindrome(len - 1);
        const std::size_t overlap = std::min(head, w.size() - len);
        for (std::size_t t = 0; t < overlap; ++t)
            if (w[len + t] != w[head - 1 - t]) return false;
    }
    return true;
}

std::uint64_t morse_complexity_closed_form(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("n must be at least 1");
    if (n == 1) return 2;
    if (n == 2) return 4;
    const std::uint64_t r = std::bit_width(n - 2) - 1;
    const std::uint64_t pow = std::uint64_t{1} << r;
    const std::uint64_t q = n - 1 - pow;
    return 2 * q <= pow ? 3 * pow + 4 * q : 4 * pow + 2 * q;
}

std::size_t nonrepetitive_complexity(const Word& w, std::size_t n) {
    if (n == 0) throw InvalidArgument("window length must be positive");
    if (n > w.size()) throw PartialResult("prefix shorter than the window", 0);
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i + n <= w.size(); ++i)
        if (!seen.insert(w.bytes(i, n)).second) return i;
    const std::size_t bound = w.size() - n + 1;
    throw PartialResult("no repeated window within the prefix; P^N(" + std::to_string(n) + ") >= " +
                            std::to_string(bound),
                        bound);
}

std::size_t nonrepetitive_complexity(const WordGenerator& gen, std::size_t n, std::size_t initial_length,
                                     std::size_t max_length) {
    std::size_t len = std::max(initial_length, n);
    for (;;) {
        try {
            return nonrepetitive_complexity(gen(len), n);
        } catch (const PartialResult& e) {
            if (len >= max_length) throw;
            len = std::min(2 * len, max_length);
        }
    }
}

EulerianEstimate eulerian_entropy_estimate(const Word& w, std::size_t n_min, std::size_t n_max) {
    if (n_min == 0 || n_min > n_max) throw InvalidArgument("need 1 <= n_min <= n_max");
    EulerianEstimate out;
    out.estimate = -HUGE_VAL;
    for (std::size_t n = n_min; n <= n_max; ++n) {
        const double ratio = std::log(static_cast<double>(nonrepetitive_complexity(w, n))) / static_cast<double>(n);
        out.n.push_back(n);
        out.ratios.push_back(ratio);
        out.estimate = std::max(out.estimate, ratio);
    }
    return out;
}

std::size_t window_complexity(const Word& w, std::size_t n) {
    if (n == 0) throw InvalidArgument("window length must be positive");
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i + n <= w.size(); i += n) seen.insert(w.bytes(i, n));
    return seen.size();
}

std::size_t arithmetic_complexity(const Word& w, std::size_t n, std::size_t k_max) {
    if (n == 0 || k_max == 0) throw InvalidArgument("length and step bound must be positive");
    std::unordered_set<std::string> seen;
    std::string key(n, '\0');
    for (std::size_t d = 1; d <= k_max; ++d) {
        for (std::size_t i = 0; i + (n - 1) * d < w.size(); ++i) {
            for (std::size_t j = 0; j < n; ++j) key[j] = static_cast<char>(w[i + j * d]);
            seen.insert(key);
        }
    }
    return seen.size();
}

std::size_t pattern_factor_count(const Word& w, const std::vector<std::size_t>& tau) {
    if (tau.empty()) return 1;
    for (std::size_t j = 1; j < tau.size(); ++j)
        if (tau[j] <= tau[j - 1]) throw InvalidArgument("pattern must be strictly increasing");
    PatternCounter counter(w);
    return counter.count(tau);
}

MaximalPatternResult maximal_pattern_complexity_lb(const Word& w, std::size_t k, std::size_t window) {
    if (k == 0) throw InvalidArgument("pattern size must be positive");
    if (k - 1 > window) throw InvalidArgument("window too small for the pattern size");
    if (window >= w.size()) throw InvalidArgument("window must be shorter than the word");
    MaximalPatternResult out;
    out.window = window;
    const double ceiling = std::pow(static_cast<double>(w.alphabet().size()), static_cast<double>(k));
    PatternCounter counter(w);
    std::vector<std::size_t> tau(k);
    for (std::size_t j = 0; j < k; ++j) tau[j] = j;
    for (;;) {
        ++out.patterns_tested;
        const std::size_t c = counter.count(tau);
        if (c > out.value) {
            out.value = c;
            out.best_pattern = tau;
            if (static_cast<double>(c) >= ceiling) break;
        }
        // next (k-1)-subset of {1..window} in lexicographic order
        std::size_t j = k;
        while (j-- > 1) {
            if (tau[j] < window - (k - 1 - j)) break;
        }
        if (j == 0) break;
        ++tau[j];
        for (std::size_t t = j + 1; t < k; ++t) tau[t] = tau[t - 1] + 1;
    }
    return out;
}

double inconstancy(const Word& w, double h) {
    if (w.alphabet().size() != 2) throw InvalidArgument("inconstancy is defined for binary words");
    if (!(h > 0)) throw InvalidArgument("height must be positive");
    if (w.size() < 2) throw InvalidArgument("inconstancy needs at least two symbols");
    const Word b01(w.alphabet_ptr(), {0, 1});
    const Word b10(w.alphabet_ptr(), {1, 0});
    const double changes = block_frequency(w, b01) + block_frequency(w, b10);
    return 1.0 + (std::sqrt(h * h + 1.0) - 1.0) * changes;
}

}  // namespace symdyn
