#ifndef SYMDYN_MARKOV_HPP
#define SYMDYN_MARKOV_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/intricacy.hpp"
#include "symdyn/subshift.hpp"

namespace symdyn {

using StochasticMatrix = std::vector<std::vector<double>>;

/// Transition probabilities keyed by context followed by the next symbol,
/// e.g. "00" for P(0 -> 0) at order 1 or "100" for P(10 -> 0) at order 2.
using MarkovParams = std::map<std::string, double>;

/// Stationary r-step Markov measure supported on an SFT. States are the
/// allowed r-blocks; a state stands for the last r symbols seen and emits
/// its final symbol.
class MarkovMeasure {
public:
    /// Row-stochastic matrix over the allowed r-blocks (see states()).
    /// Throws InvalidArgument for non-stochastic rows or mass on forbidden
    /// transitions, PreconditionError when the chain has no unique
    /// recurrent class.
    MarkovMeasure(const Sft& base, std::size_t order, StochasticMatrix transition);

    const Sft& base() const noexcept { return base_; }
    std::size_t order() const noexcept { return order_; }
    const std::vector<Word>& states() const noexcept { return states_; }
    std::size_t state_count() const noexcept { return states_.size(); }
    const StochasticMatrix& transition() const noexcept { return transition_; }
    const std::vector<double>& stationary() const noexcept { return stationary_; }
    Symbol emitted(std::size_t state) const { return states_[state][order_ - 1]; }
    /// Whether base allows state a to be followed by state b.
    bool admissible(std::size_t a, std::size_t b) const { return admissible_[a][b]; }

    /// Probability of the state sequence's symbol word (cylinder at time 0).
    double cylinder(const Word& w) const;
    /// Stationary distribution of the emitted symbol.
    std::vector<double> symbol_marginal() const;
    /// ||pP - p||_1.
    double stationarity_residual() const;

private:
    Sft base_;
    std::size_t order_;
    std::vector<Word> states_;
    std::vector<std::vector<bool>> admissible_;
    StochasticMatrix transition_;
    std::vector<double> stationary_;
};

/// Allowed r-blocks of x in lexicographic order, the state space of order r.
std::vector<Word> markov_states(const Sft& x, std::size_t order);

/// Builds an order-r measure from parameters. Successors not named in
/// params share the remaining probability of their context equally.
MarkovMeasure build_rstep(const Sft& x, std::size_t order, const MarkovParams& params);

/// P = [[p00, 1-p00], [1, 0]] on the golden mean shift.
MarkovMeasure golden_mean_1step(double p00);

/// "p00=0.618,p11=0.5" (the leading p is optional).
MarkovParams parse_markov_params(std::string_view text);

double entropy_rate(const MarkovMeasure& m);
/// Entropy of the time-0 symbol.
double marginal_entropy(const MarkovMeasure& m);
/// H(alpha | alpha_i) = H(x_0, x_i) - H(x_0), i >= 1.
double conditional_entropy_at_lag(const MarkovMeasure& m, std::size_t i);

struct MarkovIntricacy {
    double entropy = 0.0;
    double asc = 0.0;
    double intricacy = 0.0;
    std::size_t terms = 0;
    double tail_bound = 0.0;
    /// Set when a slightly negative intricacy (within 1e-9) was reported as 0.
    bool clamped = false;
};

/// Asc = (1/2) sum_i 2^-i H(alpha | alpha_i), truncated once
/// 2^-K ln|A| < tol, and Int = 2 Asc - h.
MarkovIntricacy markov_intricacy(const MarkovMeasure& m, double tol = 1e-12);
double asc_mu(const MarkovMeasure& m, double tol = 1e-12);
double int_mu(const MarkovMeasure& m, double tol = 1e-12);

inline constexpr std::size_t kMaxMeasureHorizon = 18;

/// (1/n) sum_S c_S H(alpha_S) over all subsets of {0, ..., n-1}, computed
/// from cylinder probabilities.
double brute_asc_mu(const MarkovMeasure& m, std::size_t n, const CoefficientSystem& cs = CoefficientSystem::uniform());

}  // namespace symdyn

#endif
