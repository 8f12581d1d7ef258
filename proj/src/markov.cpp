#include "symdyn/markov.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include <Eigen/Dense>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

constexpr double kRowTolerance = 1e-12;
constexpr std::size_t kDirectSolveLimit = 64;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double shannon(const std::vector<double>& v) {
    double h = 0.0;
    for (double x : v) h -= xlogx(x);
    return h;
}

Eigen::MatrixXd to_eigen(const StochasticMatrix& p) {
    const auto d = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = p[i][j];
    return m;
}

// Stationary vector supported on the unique recurrent class of P.
std::vector<double> stationary_vector(const StochasticMatrix& p) {
    const std::size_t d = p.size();
    std::vector<std::vector<bool>> reach(d, std::vector<bool>(d, false));
    for (std::size_t s = 0; s < d; ++s) {
        std::vector<std::size_t> stack{s};
        reach[s][s] = true;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (std::size_t u = 0; u < d; ++u)
                if (p[v][u] > 0.0 && !reach[s][u]) {
                    reach[s][u] = true;
                    stack.push_back(u);
                }
        }
    }
    std::vector<std::size_t> recurrent;
    for (std::size_t i = 0; i < d; ++i) {
        bool closed = true;
        for (std::size_t j = 0; j < d && closed; ++j)
            if (reach[i][j] && !reach[j][i]) closed = false;
        if (closed) recurrent.push_back(i);
    }
    for (auto i : recurrent)
        for (auto j : recurrent)
            if (!reach[i][j])
                throw PreconditionError("Markov chain has more than one recurrent class; stationary measure is not unique");

    const auto c = static_cast<Eigen::Index>(recurrent.size());
    Eigen::VectorXd pi(c);
    if (recurrent.size() <= kDirectSolveLimit) {
        Eigen::MatrixXd a(c, c);
        for (Eigen::Index i = 0; i < c; ++i)
            for (Eigen::Index j = 0; j < c; ++j) a(i, j) = p[recurrent[j]][recurrent[i]] - (i == j ? 1.0 : 0.0);
        a.row(c - 1).setOnes();
        Eigen::VectorXd b = Eigen::VectorXd::Zero(c);
        b(c - 1) = 1.0;
        pi = a.fullPivLu().solve(b);
    } else {
        Eigen::MatrixXd lazy(c, c);
        for (Eigen::Index i = 0; i < c; ++i)
            for (Eigen::Index j = 0; j < c; ++j)
                lazy(i, j) = 0.5 * p[recurrent[i]][recurrent[j]] + (i == j ? 0.5 : 0.0);
        pi = Eigen::VectorXd::Constant(c, 1.0 / static_cast<double>(c));
        for (int iter = 0; iter < 1000000; ++iter) {
            Eigen::VectorXd next = lazy.transpose() * pi;
            const double change = (next - pi).lpNorm<1>();
            pi = next;
            if (change < 1e-15) break;
        }
    }
    std::vector<double> out(d, 0.0);
    double total = 0.0;
    for (Eigen::Index i = 0; i < c; ++i) {
        const double v = std::max(0.0, pi(i));
        out[recurrent[static_cast<std::size_t>(i)]] = v;
        total += v;
    }
    for (auto& v : out) v /= total;
    return out;
}

std::vector<std::vector<double>> matrix_power_rows(const StochasticMatrix& p, std::size_t e) {
    const std::size_t d = p.size();
    std::vector<std::vector<double>> out(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) out[i][i] = 1.0;
    for (std::size_t step = 0; step < e; ++step) {
        std::vector<std::vector<double>> next(d, std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k)
                if (out[i][k] != 0.0)
                    for (std::size_t j = 0; j < d; ++j) next[i][j] += out[i][k] * p[k][j];
        out.swap(next);
    }
    return out;
}

std::vector<std::vector<bool>> admissibility(const Sft& x, std::size_t order, const std::vector<Word>& states) {
    std::unordered_set<std::string_view> longer;
    const auto extended = enumerate_blocks(x, order + 1);
    for (const auto& w : extended.factors) longer.insert(w.bytes());
    const std::size_t d = states.size();
    std::vector<std::vector<bool>> out(d, std::vector<bool>(d, false));
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            if (states[a].bytes(1, order - 1) != states[b].bytes(0, order - 1)) continue;
            std::string joined(states[a].bytes());
            joined += states[b].bytes().back();
            out[a][b] = longer.contains(joined);
        }
    }
    return out;
}

}  // namespace

std::vector<Word> markov_states(const Sft& x, std::size_t order) {
    if (order == 0) throw InvalidArgument("Markov order must be at least 1");
    if (order < x.block_length())
        throw InvalidArgument("Markov order must be at least the SFT's block length " +
                              std::to_string(x.block_length()));
    return enumerate_blocks(x, order).factors;
}

MarkovMeasure::MarkovMeasure(const Sft& base, std::size_t order, StochasticMatrix transition)
    : base_(base), order_(order), states_(markov_states(base, order)), transition_(std::move(transition)) {
    const std::size_t d = states_.size();
    admissible_ = admissibility(base_, order_, states_);
    if (transition_.size() != d) throw InvalidArgument("transition matrix size must match the number of states");
    for (std::size_t a = 0; a < d; ++a) {
        if (transition_[a].size() != d) throw InvalidArgument("transition matrix must be square");
        double sum = 0.0;
        for (std::size_t b = 0; b < d; ++b) {
            const double v = transition_[a][b];
            if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("transition probabilities must lie in [0,1]");
            if (v > 0.0 && !admissible_[a][b])
                throw InvalidArgument("probability mass on forbidden transition " + states_[a].to_string() + " -> " +
                                      states_[b].to_string());
            sum += v;
        }
        if (std::abs(sum - 1.0) > kRowTolerance)
            throw InvalidArgument("row " + states_[a].to_string() + " does not sum to 1");
    }
    stationary_ = stationary_vector(transition_);
}

double MarkovMeasure::cylinder(const Word& w) const {
    if (w.empty()) return 1.0;
    const auto s = w.bytes();
    if (w.size() < order_) {
        double total = 0.0;
        for (std::size_t i = 0; i < states_.size(); ++i)
            if (states_[i].bytes(0, w.size()) == s) total += stationary_[i];
        return total;
    }
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < states_.size(); ++i) index.emplace(states_[i].bytes(), i);
    auto it = index.find(s.substr(0, order_));
    if (it == index.end()) return 0.0;
    std::size_t cur = it->second;
    double prob = stationary_[cur];
    for (std::size_t t = order_; t < w.size() && prob > 0.0; ++t) {
        auto nx = index.find(s.substr(t + 1 - order_, order_));
        if (nx == index.end()) return 0.0;
        prob *= transition_[cur][nx->second];
        cur = nx->second;
    }
    return prob;
}

std::vector<double> MarkovMeasure::symbol_marginal() const {
    std::vector<double> out(base_.alphabet().size(), 0.0);
    for (std::size_t i = 0; i < states_.size(); ++i) out[emitted(i)] += stationary_[i];
    return out;
}

double MarkovMeasure::stationarity_residual() const {
    double r = 0.0;
    for (std::size_t j = 0; j < states_.size(); ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < states_.size(); ++i) v += stationary_[i] * transition_[i][j];
        r += std::abs(v - stationary_[j]);
    }
    return r;
}

MarkovMeasure build_rstep(const Sft& x, std::size_t order, const MarkovParams& params) {
    const auto states = markov_states(x, order);
    const std::size_t d = states.size();
    const auto admissible = admissibility(x, order, states);
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < d; ++i) index.emplace(states[i].bytes(), i);

    StochasticMatrix p(d, std::vector<double>(d, 0.0));
    std::vector<std::vector<bool>> fixed(d, std::vector<bool>(d, false));
    for (const auto& [key, value] : params) {
        const Word w = Word::parse(key, x.alphabet_ptr());
        if (w.size() != order + 1)
            throw InvalidArgument("parameter '" + key + "' must name " + std::to_string(order + 1) + " symbols");
        if (!(value >= 0.0 && value <= 1.0)) throw InvalidArgument("parameter '" + key + "' must lie in [0,1]");
        const auto from = index.find(w.bytes(0, order));
        const auto to = index.find(w.bytes(1, order));
        if (from == index.end()) throw InvalidArgument("parameter '" + key + "' uses a forbidden context");
        if (to == index.end() || !admissible[from->second][to->second]) {
            if (value > 0.0) throw InvalidArgument("parameter '" + key + "' puts mass on a forbidden transition");
            continue;
        }
        p[from->second][to->second] = value;
        fixed[from->second][to->second] = true;
    }
    for (std::size_t a = 0; a < d; ++a) {
        double given = 0.0;
        std::size_t open = 0;
        for (std::size_t b = 0; b < d; ++b) {
            if (fixed[a][b]) given += p[a][b];
            else if (admissible[a][b]) ++open;
        }
        if (given > 1.0 + kRowTolerance)
            throw InvalidArgument("probabilities leaving context " + states[a].to_string() + " exceed 1");
        if (open == 0) continue;
        const double share = std::max(0.0, 1.0 - given) / static_cast<double>(open);
        for (std::size_t b = 0; b < d; ++b)
            if (!fixed[a][b] && admissible[a][b]) p[a][b] = share;
    }
    return MarkovMeasure(x, order, std::move(p));
}

MarkovMeasure golden_mean_1step(double p00) {
    if (!(p00 >= 0.0 && p00 <= 1.0)) throw InvalidArgument("p00 must lie in [0,1]");
    return build_rstep(Sft::named("golden"), 1, {{"00", p00}});
}

MarkovParams parse_markov_params(std::string_view text) {
    MarkovParams out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        auto item = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw InvalidArgument("parameters look like p00=0.5");
        auto key = item.substr(0, eq);
        if (!key.empty() && (key[0] == 'p' || key[0] == 'P')) key.remove_prefix(1);
        const auto value_text = item.substr(eq + 1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), v);
        if (ec != std::errc() || ptr != value_text.data() + value_text.size())
            throw InvalidArgument("not a number: '" + std::string(value_text) + "'");
        out[std::string(key)] = v;
    }
    return out;
}

double entropy_rate(const MarkovMeasure& m) {
    double h = 0.0;
    for (std::size_t i = 0; i < m.state_count(); ++i) {
        double row = 0.0;
        for (double v : m.transition()[i]) row -= xlogx(v);
        h += m.stationary()[i] * row;
    }
    return h;
}

double marginal_entropy(const MarkovMeasure& m) { return shannon(m.symbol_marginal()); }

namespace {

double lag_entropy(const MarkovMeasure& m, const std::vector<std::vector<double>>& power, double h_marginal) {
    const std::size_t r = m.base().alphabet().size();
    std::vector<double> joint(r * r, 0.0);
    for (std::size_t a = 0; a < m.state_count(); ++a) {
        const double pa = m.stationary()[a];
        if (pa == 0.0) continue;
        for (std::size_t b = 0; b < m.state_count(); ++b)
            joint[m.emitted(a) * r + m.emitted(b)] += pa * power[a][b];
    }
    return std::max(0.0, shannon(joint) - h_marginal);
}

}  // namespace

double conditional_entropy_at_lag(const MarkovMeasure& m, std::size_t i) {
    if (i == 0) throw InvalidArgument("lag must be at least 1");
    return lag_entropy(m, matrix_power_rows(m.transition(), i), marginal_entropy(m));
}

MarkovIntricacy markov_intricacy(const MarkovMeasure& m, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    const double log_r = std::log(static_cast<double>(m.base().alphabet().size()));
    const double h_marginal = marginal_entropy(m);
    MarkovIntricacy out;
    out.entropy = entropy_rate(m);
    const Eigen::MatrixXd p = to_eigen(m.transition());
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(p.rows(), p.cols());
    const std::size_t d = m.state_count();
    std::vector<std::vector<double>> rows(d, std::vector<double>(d));
    double sum = 0.0;
    std::size_t k = 0;
    double tail = log_r;
    while (k == 0 || tail >= tol) {
        ++k;
        power = power * p;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                rows[a][b] = power(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        sum += std::ldexp(lag_entropy(m, rows, h_marginal), -static_cast<int>(k));
        tail = std::ldexp(log_r, -static_cast<int>(k));
        if (log_r == 0.0) break;
    }
    out.asc = 0.5 * sum;
    out.intricacy = 2.0 * out.asc - out.entropy;
    if (out.intricacy < 0.0 && out.intricacy >= -1e-9) {
        out.intricacy = 0.0;
        out.clamped = true;
    }
    out.terms = k;
    out.tail_bound = 0.5 * tail;
    return out;
}

double asc_mu(const MarkovMeasure& m, double tol) { return markov_intricacy(m, tol).asc; }
double int_mu(const MarkovMeasure& m, double tol) { return markov_intricacy(m, tol).intricacy; }

double brute_asc_mu(const MarkovMeasure& m, std::size_t n, const CoefficientSystem& cs) {
    if (n == 0) throw InvalidArgument("n must be at least 1");
    if (n > kMaxMeasureHorizon)
        throw ResourceError("cylinder sums are limited to n <= " + std::to_string(kMaxMeasureHorizon));
    const std::size_t d = m.state_count();
    const std::size_t r = m.base().alphabet().size();
    std::vector<std::vector<std::vector<double>>> powers(n);
    for (std::size_t g = 1; g < n; ++g) powers[g] = matrix_power_rows(m.transition(), g);

    // Each node is a set S whose largest member was just added; its patterns
    // carry the joint law of (pattern, current state).
    using Patterns = std::vector<std::vector<double>>;
    std::vector<double> by_size(n + 1, 0.0);
    auto split = [&](const Patterns& in) {
        Patterns out;
        for (const auto& v : in) {
            for (std::size_t s = 0; s < r; ++s) {
                std::vector<double> part(d, 0.0);
                double mass = 0.0;
                for (std::size_t i = 0; i < d; ++i)
                    if (m.emitted(i) == s) {
                        part[i] = v[i];
                        mass += v[i];
                    }
                if (mass > 0.0) out.push_back(std::move(part));
            }
        }
        return out;
    };
    auto advance = [&](const Patterns& in, std::size_t gap) {
        Patterns out;
        out.reserve(in.size());
        const auto& pw = powers[gap];
        for (const auto& v : in) {
            std::vector<double> next(d, 0.0);
            for (std::size_t i = 0; i < d; ++i)
                if (v[i] != 0.0)
                    for (std::size_t j = 0; j < d; ++j) next[j] += v[i] * pw[i][j];
            out.push_back(std::move(next));
        }
        return out;
    };
    std::function<void(const Patterns&, std::size_t, std::size_t)> visit =
        [&](const Patterns& patterns, std::size_t last, std::size_t size) {
            double h = 0.0;
            for (const auto& v : patterns) {
                double q = 0.0;
                for (double x : v) q += x;
                h -= xlogx(q);
            }
            by_size[size] += h;
            for (std::size_t next = last + 1; next < n; ++next)
                visit(split(advance(patterns, next - last)), next, size + 1);
        };
    const Patterns root = split({m.stationary()});
    for (std::size_t first = 0; first < n; ++first) visit(root, first, 1);

    const auto c = cs.coefficients(n);
    double total = 0.0;
    for (std::size_t k = 0; k <= n; ++k) total += c[k] * by_size[k];
    return total / static_cast<double>(n);
}

}  // namespace symdyn
