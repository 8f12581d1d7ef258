#ifndef SYMDYN_INTRICACY_HPP
#define SYMDYN_INTRICACY_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symdyn/subshift.hpp"

namespace symdyn {

/// Exchangeable weights c(n, S) depending only on |S|.
class CoefficientSystem {
public:
    enum class Kind { Uniform, Neural, PSymmetric, FromMeasure };

    static CoefficientSystem uniform();
    static CoefficientSystem neural();
    static CoefficientSystem p_symmetric(double p);
    /// Symmetric probability measure on [0,1]: atoms (x, weight) plus a
    /// multiple of Lebesgue measure. Throws InvalidArgument unless the atoms
    /// are symmetric about 1/2 and the weights sum to 1.
    static CoefficientSystem from_measure(std::vector<std::pair<double, double>> atoms, double lebesgue_weight);

    /// uniform | neural | psym:<p> | measure:<x>@<w>,...[,leb@<w>]
    static CoefficientSystem parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    double p() const noexcept { return p_; }
    std::string name() const;

    /// c(n, k) for one subset of size k.
    double operator()(std::size_t n, std::size_t k) const;
    /// c(n, 0), ..., c(n, n).
    std::vector<double> coefficients(std::size_t n) const;

private:
    Kind kind_ = Kind::Uniform;
    double p_ = 0.5;
    std::vector<std::pair<double, double>> atoms_;
    double lebesgue_ = 0.0;
};

enum class IntricacyMethod { Brute, Series };

struct IntricacyResult {
    double asc = 0.0;
    double intricacy = 0.0;
    /// Horizon of a finite-n value; empty for the limit.
    std::optional<std::size_t> n;
    std::string weights;
    IntricacyMethod method = IntricacyMethod::Brute;
    /// Series only: last term used and the bound on the omitted tail.
    std::optional<std::size_t> terms;
    std::optional<double> tail_bound;
};

/// Largest horizon accepted by the subset sums.
inline constexpr std::size_t kMaxBruteHorizon = 22;

/// Asc(n) = (1/n) sum_S c_S log N(S) and
/// Int(n) = (1/n) sum_S c_S [log N(S) + log N(S^c) - log N(n*)], over all
/// subsets S of {0, ..., n-1}. threads = 0 uses the hardware concurrency;
/// the value does not depend on it.
IntricacyResult intricacy_finite(const Sft& x, std::size_t n, const CoefficientSystem& cs, unsigned threads = 0);

double asc_finite(const Sft& x, std::size_t n, const CoefficientSystem& cs, unsigned threads = 0);
double int_finite(const Sft& x, std::size_t n, const CoefficientSystem& cs, unsigned threads = 0);

/// Limit for uniform weights on a memory-one SFT with M^2 > 0:
/// Asc = (1/4) sum_k log|L_k| / 2^k and Int = 2 Asc - h. Throws
/// PreconditionError outside those hypotheses.
IntricacyResult asc_sft_series(const Sft& x, double tail_tolerance = 1e-10);

/// intricacy_finite for n = 1..n_max.
std::vector<IntricacyResult> asc_profile(const Sft& x, std::size_t n_max, const CoefficientSystem& cs,
                                         unsigned threads = 0);

}  // namespace symdyn

#endif
