#include "symdyn/intricacy.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr std::size_t kChunks = 64;

double binomial(std::size_t n, std::size_t k) {
    double c = 1.0;
    k = std::min(k, n - k);
    for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw InvalidArgument("not a number: '" + std::string(s) + "'");
    return v;
}

unsigned resolve_threads(unsigned threads) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    return threads;
}

// Sums log N(S) over all subsets of {0..n-1}, grouped by |S|. Work is split
// into fixed chunks combined in order, so the result is schedule-independent.
template <class LogCount>
std::vector<double> sums_by_size(std::size_t n, unsigned threads, const LogCount& log_count) {
    const std::uint64_t total = std::uint64_t{1} << n;
    const std::uint64_t chunk_size = (total + kChunks - 1) / kChunks;
    std::vector<std::vector<double>> partial(kChunks, std::vector<double>(n + 1, 0.0));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t c; (c = next.fetch_add(1)) < kChunks;) {
            if (failed) return;
            try {
                const std::uint64_t lo = c * chunk_size;
                const std::uint64_t hi = std::min(total, lo + chunk_size);
                for (std::uint64_t mask = lo; mask < hi; ++mask)
                    partial[c][static_cast<std::size_t>(std::popcount(mask))] += log_count(mask);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                return;
            }
        }
    };
    const unsigned t = std::min<unsigned>(resolve_threads(threads), kChunks);
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < t; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    std::vector<double> out(n + 1, 0.0);
    for (const auto& p : partial)
        for (std::size_t k = 0; k <= n; ++k) out[k] += p[k];
    return out;
}

}  // namespace

CoefficientSystem CoefficientSystem::uniform() { return {}; }

CoefficientSystem CoefficientSystem::neural() {
    CoefficientSystem cs;
    cs.kind_ = Kind::Neural;
    return cs;
}

CoefficientSystem CoefficientSystem::p_symmetric(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in [0,1]");
    CoefficientSystem cs;
    cs.kind_ = Kind::PSymmetric;
    cs.p_ = p;
    return cs;
}

CoefficientSystem CoefficientSystem::from_measure(std::vector<std::pair<double, double>> atoms, double lebesgue_weight) {
    if (lebesgue_weight < 0.0) throw InvalidArgument("Lebesgue weight must be nonnegative");
    double total = lebesgue_weight;
    for (auto [x, w] : atoms) {
        if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("atoms must lie in [0,1]");
        if (w < 0.0) throw InvalidArgument("atom weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > kSymmetryTolerance) throw InvalidArgument("measure weights must sum to 1");
    for (auto [x, w] : atoms) {
        double mirrored = 0.0, here = 0.0;
        for (auto [y, v] : atoms) {
            if (std::abs(y - (1.0 - x)) <= kSymmetryTolerance) mirrored += v;
            if (std::abs(y - x) <= kSymmetryTolerance) here += v;
        }
        if (std::abs(mirrored - here) > kSymmetryTolerance)
            throw InvalidArgument("measure is not symmetric about 1/2");
    }
    CoefficientSystem cs;
    cs.kind_ = Kind::FromMeasure;
    cs.atoms_ = std::move(atoms);
    cs.lebesgue_ = lebesgue_weight;
    return cs;
}

CoefficientSystem CoefficientSystem::parse(std::string_view text) {
    if (text == "uniform") return uniform();
    if (text == "neural") return neural();
    if (text.starts_with("psym:")) return p_symmetric(parse_double(text.substr(5)));
    if (text.starts_with("measure:")) {
        std::vector<std::pair<double, double>> atoms;
        double leb = 0.0;
        std::string_view rest = text.substr(8);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const auto item = rest.substr(0, comma);
            const auto at = item.find('@');
            if (at == std::string_view::npos) throw InvalidArgument("measure items look like <x>@<weight>");
            const double w = parse_double(item.substr(at + 1));
            if (item.substr(0, at) == "leb")
                leb += w;
            else
                atoms.emplace_back(parse_double(item.substr(0, at)), w);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        return from_measure(std::move(atoms), leb);
    }
    throw InvalidArgument("unknown weights '" + std::string(text) + "' (expected uniform, neural, psym:<p> or measure:...)");
}

std::string CoefficientSystem::name() const {
    std::ostringstream out;
    switch (kind_) {
        case Kind::Uniform: return "uniform";
        case Kind::Neural: return "neural";
        case Kind::PSymmetric:
            out << "psym:" << p_;
            return out.str();
        case Kind::FromMeasure:
            out << "measure:";
            for (auto [x, w] : atoms_) out << x << '@' << w << ',';
            out << "leb@" << lebesgue_;
            return out.str();
    }
    return {};
}

double CoefficientSystem::operator()(std::size_t n, std::size_t k) const {
    if (k > n) throw InvalidArgument("subset size exceeds n");
    const double kk = static_cast<double>(k), rest = static_cast<double>(n - k);
    switch (kind_) {
        case Kind::Uniform:
            return std::ldexp(1.0, -static_cast<int>(n));
        case Kind::Neural:
            return 1.0 / (static_cast<double>(n + 1) * binomial(n, k));
        case Kind::PSymmetric:
            return 0.5 * (std::pow(p_, kk) * std::pow(1.0 - p_, rest) + std::pow(p_, rest) * std::pow(1.0 - p_, kk));
        case Kind::FromMeasure: {
            double c = lebesgue_ / (static_cast<double>(n + 1) * binomial(n, k));
            for (auto [x, w] : atoms_) c += w * std::pow(x, kk) * std::pow(1.0 - x, rest);
            return c;
        }
    }
    return 0.0;
}

std::vector<double> CoefficientSystem::coefficients(std::size_t n) const {
    if (n == 0) throw InvalidArgument("n must be at least 1");
    std::vector<double> out(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out[k] = (*this)(n, k);
    return out;
}

IntricacyResult intricacy_finite(const Sft& x, std::size_t n, const CoefficientSystem& cs, unsigned threads) {
    if (n == 0) throw InvalidArgument("n must be at least 1");
    if (n > kMaxBruteHorizon)
        throw ResourceError("subset sums over 2^" + std::to_string(n) + " sets exceed the limit n <= " +
                            std::to_string(kMaxBruteHorizon));
    std::vector<double> sums;
    if (x.is_memory_one() && is_power_positive(x, 2)) {
        std::vector<double> log_blocks(n + 1);
        for (std::size_t len = 0; len <= n; ++len) log_blocks[len] = log_big(count_blocks(x, len));
        sums = sums_by_size(n, threads, [&](std::uint64_t mask) {
            double s = 0.0;
            std::size_t run = 0;
            for (std::size_t i = 0; i <= n; ++i) {
                if (i < n && ((mask >> i) & 1U)) {
                    ++run;
                } else if (run > 0) {
                    s += log_blocks[run];
                    run = 0;
                }
            }
            return s;
        });
    } else {
        sums = sums_by_size(n, threads, [&](std::uint64_t mask) {
            return log_big(pattern_count(x, CoordinateSet::from_mask(n, mask), PatternMethod::Transfer));
        });
    }
    const auto c = cs.coefficients(n);
    double weighted = 0.0;
    for (std::size_t k = 0; k <= n; ++k) weighted += c[k] * sums[k];
    IntricacyResult out;
    out.n = n;
    out.weights = cs.name();
    out.method = IntricacyMethod::Brute;
    out.asc = weighted / static_cast<double>(n);
    out.intricacy = 2.0 * out.asc - log_big(count_blocks(x, n)) / static_cast<double>(n);
    return out;
}

double asc_finite(const Sft& x, std::size_t n, const CoefficientSystem& cs, unsigned threads) {
    return intricacy_finite(x, n, cs, threads).asc;
}

double int_finite(const Sft& x, std::size_t n, const CoefficientSystem& cs, unsigned threads) {
    return intricacy_finite(x, n, cs, threads).intricacy;
}

IntricacyResult asc_sft_series(const Sft& x, double tail_tolerance) {
    if (!x.is_memory_one() || !is_power_positive(x, 2))
        throw PreconditionError("the series needs a memory-one SFT with M^2 > 0; use the finite-n profile instead");
    const double log_r = std::log(static_cast<double>(x.alphabet().size()));
    IntricacyResult out;
    out.weights = "uniform";
    out.method = IntricacyMethod::Series;
    double sum = 0.0;
    std::size_t k = 0;
    double tail = HUGE_VAL;
    BigInt blocks;
    while (tail >= tail_tolerance) {
        ++k;
        blocks = count_blocks(x, k);
        sum += std::ldexp(log_big(blocks), -static_cast<int>(k));
        tail = std::ldexp(static_cast<double>(k + 2) * log_r, -static_cast<int>(k));
        if (log_r == 0.0) break;
    }
    out.asc = 0.25 * sum;
    out.intricacy = 2.0 * out.asc - entropy(x);
    out.terms = k;
    out.tail_bound = tail;
    return out;
}

std::vector<IntricacyResult> asc_profile(const Sft& x, std::size_t n_max, const CoefficientSystem& cs,
                                         unsigned threads) {
    if (n_max > kMaxBruteHorizon)
        throw ResourceError("profile horizon exceeds the limit n <= " + std::to_string(kMaxBruteHorizon));
    std::vector<IntricacyResult> out;
    for (std::size_t n = 1; n <= n_max; ++n) out.push_back(intricacy_finite(x, n, cs, threads));
    return out;
}

}  // namespace symdyn
