#ifndef SYMDYN_OPTIMIZE_HPP
#define SYMDYN_OPTIMIZE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symdyn/markov.hpp"

namespace symdyn {

enum class MarkovTarget { Entropy, Asc, Int };

MarkovTarget parse_markov_target(std::string_view text);
std::string to_string(MarkovTarget t);

/// Order-r Markov measures on an SFT with one free probability per key.
struct MarkovFamily {
    Sft sft;
    std::size_t order = 1;
    /// Parameter keys (context + next symbol), one coordinate each.
    std::vector<std::string> keys;

    /// One key per context with at least two successors: the context's last
    /// symbol repeated when allowed, else its first allowed successor.
    static MarkovFamily standard(const Sft& sft, std::size_t order);

    MarkovParams params(const std::vector<double>& point) const;
    MarkovMeasure measure(const std::vector<double>& point) const;
};

/// Objective value; -inf where the measure is undefined.
double evaluate_target(const MarkovFamily& family, MarkovTarget target, const std::vector<double>& point);

struct OptimizeOptions {
    double grid = 0.02;
    unsigned threads = 0;
    /// Random offsets of the refinement starts, as a fraction of the grid step.
    double jitter = 0.0;
    std::uint64_t seed = 0;
    double separation = 1e-3;
    double simplex_tolerance = 1e-8;
};

struct LocalMaximum {
    std::vector<double> point;
    double value = 0.0;
};

struct OptimizationReport {
    MarkovTarget target = MarkovTarget::Asc;
    std::size_t order = 1;
    std::vector<std::string> keys;
    /// Sorted by value (descending), then by parameters.
    std::vector<LocalMaximum> maxima;
    double grid = 0.0;
    std::size_t grid_points = 0;
    std::size_t starts = 0;
    std::string method;
};

/// Grid probes (boundary values 0 and 1 included), then golden-section
/// search in one dimension or Nelder-Mead in more from every grid local
/// maximum, inside [1e-9, 1 - 1e-9]. Maxima closer than `separation` merge.
OptimizationReport optimize(const MarkovFamily& family, MarkovTarget target, const OptimizeOptions& options = {});

}  // namespace symdyn

#endif
