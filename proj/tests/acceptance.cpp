// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "symdyn/complexity.hpp"
#include "symdyn/error.hpp"
#include "symdyn/generators.hpp"
#include "symdyn/intricacy.hpp"
#include "symdyn/markov.hpp"
#include "symdyn/optimize.hpp"
#include "symdyn/subshift.hpp"

using namespace symdyn;

namespace {

/// Collects failed checks of one criterion.
struct Check {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void near(double got, double want, double tol, const std::string& what) {
        if (!(std::abs(got - want) <= tol)) {
            std::ostringstream s;
            s.precision(6);
            s << what << ": got " << got << ", want " << want << " +- " << tol;
            failures.push_back(s.str());
        }
    }
};

using Body = std::function<void(Check&)>;

int failed = 0;

void criterion(int id, const std::string& title, const Body& body) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%.2fs)\n", c.failures.empty() ? "PASS" : "FAIL", id, title.c_str(), seconds);
    for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
    std::fflush(stdout);
    failed += !c.failures.empty();
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ExactReal golden_slope() { return ExactReal::from_continued_fraction(ContinuedFraction::parse("0,2;1")); }

struct TableRow {
    std::string sft;
    std::size_t order;
    MarkovParams params;
    double h, asc, intr;
    std::string label;
};

std::vector<TableRow> table_rows() {
    return {
        {"golden", 1, {{"00", 0.618}}, 0.481, 0.266, 0.051, "golden 1-step p00=0.618"},
        {"golden", 1, {{"00", 0.533}}, 0.471, 0.271, 0.071, "golden 1-step p00=0.533"},
        {"golden", 1, {{"00", 0.216}}, 0.292, 0.208, 0.124, "golden 1-step p00=0.216"},
        {"golden", 2, {{"000", 0.618}, {"100", 0.618}}, 0.481, 0.266, 0.051, "golden 2-step (0.618,0.618)"},
        {"golden", 2, {{"000", 0.483}, {"100", 0.569}}, 0.466, 0.272, 0.078, "golden 2-step (0.483,0.569)"},
        {"golden", 2, {{"000", 0.0}, {"100", 0.275}}, 0.344, 0.221, 0.167, "golden 2-step (0,0.275)"},
        {"full2", 1, {{"00", 0.5}, {"11", 0.5}}, 0.693, 0.347, 0.0, "full2 (0.5,0.5)"},
        {"full2", 1, {{"00", 0.216}, {"11", 0.0}}, 0.292, 0.208, 0.124, "full2 (0.216,0)"},
        {"full2", 1, {{"00", 0.0}, {"11", 0.216}}, 0.292, 0.208, 0.124, "full2 (0,0.216)"},
        {"full2", 1, {{"00", 0.905}, {"11", 0.905}}, 0.315, 0.209, 0.104, "full2 (0.905,0.905)"},
    };
}

}  // namespace

int main() {
    criterion(1, "Sturmian suite for alpha = 1/tau^2", [](Check& c) {
        const auto start = std::chrono::steady_clock::now();
        const Word w = characteristic_word(ContinuedFraction::parse("0,2;1"), 2000);
        const auto pal = palindrome_complexity(w, 30);
        for (std::size_t n = 1; n <= 30; ++n) {
            c.expect(count_factors(w, n) == n + 1, "p(" + std::to_string(n) + ") != n+1");
            c.expect(pal[n - 1] == (n % 2 ? 2U : 1U), "Pal(" + std::to_string(n) + ") wrong");
        }
        c.expect(is_balanced(w, 30), "not balanced");
        c.expect(longest_rich_prefix(w) == w.size(), "some prefix is not rich");
        c.expect(elapsed_since(start) < 5.0, "runtime over 5 s");
    });

    criterion(2, "mechanical and standard word fixtures", [](Check& c) {
        const auto zero = ExactReal::from_rational(0);
        c.expect(mechanical(golden_slope(), zero, 10, MechanicalVariant::Lower).to_string() == "0010010100", "lower");
        c.expect(mechanical(golden_slope(), zero, 10, MechanicalVariant::Upper).to_string() == "1010010100", "upper");
        c.expect(standard_sequence(DirectiveSequence{{1, 1, 1, 1}}).to_string() == "01001010", "s4");
    });

    criterion(3, "eventual periodicity", [](Check& c) {
        const Word w = mechanical(ExactReal::from_rational(BigRational(3, 7)), ExactReal::from_rational(0), 700,
                                  MechanicalVariant::Lower);
        const auto v = eventual_periodicity_test(w);
        c.expect(v.eventually_periodic && v.witness && *v.witness <= 7, "3/7 not flagged with witness <= 7");
        const auto f = eventual_periodicity_test(named_sequence("fibonacci", 2000), 50);
        c.expect(!f.eventually_periodic && f.n_max == 50, "Fibonacci flagged periodic");
    });

    criterion(4, "Thue-Morse complexity, frequencies and inconstancy", [](Check& c) {
        const Word tm = named_sequence("morse", 1 << 16);
        for (std::uint64_t n = 3; n <= 64; ++n)
            c.expect(morse_complexity_closed_form(n) == count_factors(tm, n), "closed form at n=" + std::to_string(n));
        const double want[] = {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6};
        const char* blocks[] = {"00", "01", "10", "11"};
        for (int i = 0; i < 4; ++i) c.near(block_frequency(tm, testing::bin(blocks[i])), want[i], 0.01, blocks[i]);
        c.near(inconstancy(tm), (1 + 2 * std::sqrt(2.0)) / 3, 0.01, "inconstancy");
    });

    criterion(5, "inconstancy of (0^d 1)", [](Check& c) {
        for (int d = 1; d <= 6; ++d) {
            const Word w = named_sequence("periodic", 4000, std::string(static_cast<std::size_t>(d), '0') + "1");
            const Word b = Word::parse(w.to_string(), Alphabet::binary());
            const double formula = inconstancy(b);
            c.near(formula, (d - 1 + 2 * std::sqrt(2.0)) / (d + 1), 0.01, "d=" + std::to_string(d));
            const double geometric = oracle::geometric_inconstancy(oracle::raw(b), 1.0);
            c.expect(std::abs(formula - geometric) <= 0.02 * geometric, "geometric oracle at d=" + std::to_string(d));
        }
    });

    criterion(6, "SFT counts and entropies", [](Check& c) {
        const Sft g = Sft::named("golden");
        c.expect(count_blocks(g, 1) == 2 && count_blocks(g, 2) == 3 && count_blocks(g, 3) == 5, "block counts");
        c.expect(pattern_count(g, CoordinateSet(2, {0, 1})) == 3, "N({0,1})");
        c.expect(pattern_count(g, CoordinateSet(3, {0, 2})) == 4, "N({0,2})");
        c.near(entropy(g), 0.4812, 1e-3, "entropy golden");
        c.near(entropy(Sft::named("full2")), 0.6931, 1e-3, "entropy full2");
    });

    criterion(7, "golden mean Int(3)", [](Check& c) {
        const double exact = std::log(std::pow(6.0, 4) * std::pow(8.0, 2) / std::pow(5.0, 6)) / 24.0;
        const double got = int_finite(Sft::named("golden"), 3, CoefficientSystem::uniform());
        c.near(got, exact, 1e-12, "Int(3)");
        c.near(got, 0.070, 1e-3, "Int(3) approx");
    });

    criterion(8, "intricacy series", [](Check& c) {
        for (std::size_t r = 2; r <= 5; ++r)
            c.near(asc_sft_series(Sft::full_shift(r)).asc, std::log(static_cast<double>(r)) / 2, 1e-9,
                   "full " + std::to_string(r) + "-shift");
        const auto g = asc_sft_series(Sft::named("golden"));
        c.near(g.asc, 0.286, 5e-3, "golden asc");
        c.near(g.intricacy, 0.090, 5e-3, "golden int");
        bool rejected = false;
        try {
            asc_sft_series(Sft::named("period2"));
        } catch (const PreconditionError&) {
            rejected = true;
        }
        c.expect(rejected, "period2 series not rejected");
        const auto profile = asc_profile(Sft::named("period2"), 20, CoefficientSystem::uniform());
        c.expect(profile.back().asc < 0.04, "period2 asc(20) >= 0.04");
        for (std::size_t i = 1; i < profile.size(); ++i)
            c.expect(profile[i].asc <= profile[i - 1].asc + 1e-12, "period2 profile not decreasing");
    });

    criterion(9, "figI and figII discrimination", [](Check& c) {
        const Sft a = Sft::named("figI"), b = Sft::named("figII");
        for (std::size_t n = 1; n <= 10; ++n)
            c.expect(count_blocks(a, n) == count_blocks(b, n), "block counts differ at n=" + std::to_string(n));
        const auto ra = intricacy_finite(a, 10, CoefficientSystem::uniform());
        const auto rb = intricacy_finite(b, 10, CoefficientSystem::uniform());
        c.near(ra.asc, 0.399, 5e-3, "figI Asc(10)");
        c.near(rb.asc, 0.377, 5e-3, "figII Asc(10)");
        c.near(ra.intricacy, 0.254, 5e-3, "figI Int(10)");
        c.near(rb.intricacy, 0.208, 5e-3, "figII Int(10)");
    });

    criterion(10, "Markov measure tables", [](Check& c) {
        for (const auto& row : table_rows()) {
            const auto m = build_rstep(Sft::named(row.sft), row.order, row.params);
            const auto r = markov_intricacy(m);
            c.near(r.entropy, row.h, 2e-3, row.label + " h");
            c.near(r.asc, row.asc, 2e-3, row.label + " asc");
            c.near(r.intricacy, row.intr, 2e-3, row.label + " int");
        }
    });

    criterion(11, "optimizer maxima", [](Check& c) {
        const auto start = std::chrono::steady_clock::now();
        const auto gm = MarkovFamily::standard(Sft::named("golden"), 1);
        c.near(optimize(gm, MarkovTarget::Entropy).maxima.at(0).point[0], 0.618, 5e-3, "entropy argmax");
        c.near(optimize(gm, MarkovTarget::Asc).maxima.at(0).point[0], 0.533, 5e-3, "asc argmax");
        c.near(optimize(gm, MarkovTarget::Int).maxima.at(0).point[0], 0.216, 5e-3, "int argmax");
        const auto f2 = optimize(MarkovFamily::standard(Sft::full_shift(2), 1), MarkovTarget::Int);
        const auto& mx = f2.maxima;
        std::size_t global = 0;
        for (const auto& m : mx) global += m.value >= mx.at(0).value - 1e-6;
        c.expect(global == 2, "expected exactly two global maxima, got " + std::to_string(global));
        if (mx.size() >= 2) {
            c.near(mx[0].value, 0.124, 2e-3, "global maximum value");
            c.near(mx[0].point[0], mx[1].point[1], 1e-4, "0<->1 symmetry");
            c.near(mx[0].point[1], mx[1].point[0], 1e-4, "0<->1 symmetry");
        }
        bool interior = false;
        for (std::size_t k = 2; k < mx.size(); ++k)
            interior |= std::abs(mx[k].point[0] - 0.905) < 5e-3 && std::abs(mx[k].point[1] - 0.905) < 5e-3 &&
                        mx[k].value < mx[0].value;
        c.expect(interior, "no interior local maximum near (0.905,0.905)");
        c.expect(elapsed_since(start) < 60.0, "runtime over 60 s");
    });

    criterion(12, "oracle equivalence", [](Check& c) {
        for (const auto& row : table_rows()) {
            const auto m = build_rstep(Sft::named(row.sft), row.order, row.params);
            c.near(brute_asc_mu(m, 14), asc_mu(m), 0.02, row.label + " brute n=14");
        }
        for (const char* name : {"golden", "full2", "figI", "figII"}) {
            const Sft x = Sft::named(name);
            for (std::size_t horizon = 1; horizon <= 14; ++horizon) {
                PatternEnumerator e(x, horizon);
                bool same = true;
                for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << horizon) && same; ++mask) {
                    const auto s = CoordinateSet::from_mask(horizon, mask);
                    same = pattern_count(x, s) == e.count(s);
                }
                c.expect(same, std::string(name) + " differs at horizon " + std::to_string(horizon));
            }
        }
    });

    criterion(13, "coefficient systems", [](Check& c) {
        const auto leb = CoefficientSystem::from_measure({}, 1.0);
        const auto neural = CoefficientSystem::neural();
        double worst = 0;
        for (std::size_t n = 1; n <= 30; ++n)
            for (std::size_t k = 0; k <= n; ++k) worst = std::max(worst, std::abs(leb(n, k) - neural(n, k)));
        c.expect(worst <= 1e-12, "Lebesgue differs from neural");
        const std::vector<CoefficientSystem> kinds = {
            CoefficientSystem::uniform(), neural, CoefficientSystem::p_symmetric(0.1),
            CoefficientSystem::p_symmetric(0.5), leb, CoefficientSystem::from_measure({{0.0, 0.2}, {1.0, 0.2}, {0.3, 0.1}, {0.7, 0.1}}, 0.4)};
        for (const auto& cs : kinds) {
            for (std::size_t n = 1; n <= 30; ++n) {
                const auto coeff = cs.coefficients(n);
                double total = 0;
                bool symmetric = true;
                for (std::size_t k = 0; k <= n; ++k) {
                    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) * coeff[k];
                    symmetric &= std::abs(coeff[k] - coeff[n - k]) <= 1e-12 * std::max(1.0, coeff[k]);
                }
                c.expect(std::abs(total - 1.0) <= 1e-9, cs.name() + " not normalized at n=" + std::to_string(n));
                c.expect(symmetric, cs.name() + " not symmetric at n=" + std::to_string(n));
            }
        }
    });

    criterion(14, "pattern complexities", [](Check& c) {
        const Word sturm = characteristic_word(ContinuedFraction::parse("0,2;1"), 2000);
        for (std::size_t k = 1; k <= 5; ++k)
            c.expect(maximal_pattern_complexity_lb(sturm, k, 60).value == 2 * k, "Sturmian k=" + std::to_string(k));
        const Word tm = named_sequence("morse", 4096);
        for (std::size_t k = 1; k <= 4; ++k)
            c.expect(maximal_pattern_complexity_lb(tm, k, 64).value == (std::size_t{1} << k), "Morse k=" + std::to_string(k));
        std::mt19937_64 rng(2024);
        std::size_t violations = 0;
        for (int trial = 0; trial < 10000; ++trial) {
            const int r = 2 + trial % 3;
            const std::size_t length = 10 + static_cast<std::size_t>(rng() % 90);
            const std::size_t n = 1 + static_cast<std::size_t>(rng() % 8);
            const Word w = testing::from_raw(testing::random_raw(rng, length, r), Alphabet::from_labels(std::string("0123").substr(0, static_cast<std::size_t>(r))));
            std::size_t pn = 0;
            try {
                pn = nonrepetitive_complexity(w, n);
            } catch (const PartialResult& e) {
                pn = e.lower_bound();
            }
            violations += pn > count_factors(w, n);
        }
        c.expect(violations == 0, std::to_string(violations) + " random words with P^N(n) > p(n)");
    });

    return failed == 0 ? 0 : 1;
}
