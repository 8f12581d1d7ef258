#include "symdyn/subshift.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

constexpr std::size_t kMaxRecodedStates = std::size_t{1} << 20;

using StateSet = std::vector<std::uint64_t>;

void set_bit(StateSet& s, std::size_t i) { s[i / 64] |= std::uint64_t{1} << (i % 64); }

bool any_bit(const StateSet& s) {
    return std::any_of(s.begin(), s.end(), [](std::uint64_t w) { return w != 0; });
}

bool contains_forbidden(std::string_view block, const std::vector<std::string>& forbidden) {
    for (const auto& f : forbidden)
        if (block.find(f) != std::string_view::npos) return true;
    return false;
}

AlphabetPtr alphabet_from_json(const nlohmann::json& j) {
    if (j.is_string()) return Alphabet::from_labels(j.get<std::string>());
    if (!j.is_array()) throw InvalidArgument("\"alphabet\" must be a string or an array of labels");
    std::string labels;
    for (const auto& item : j) {
        const auto label = item.get<std::string>();
        if (detail::utf8_decode(label).size() != 1)
            throw InvalidArgument("alphabet labels must be single characters");
        labels += label;
    }
    return Alphabet::from_labels(labels);
}

std::vector<std::vector<bool>> boolean_product(const std::vector<std::vector<bool>>& a,
                                               const std::vector<std::vector<bool>>& b) {
    const std::size_t n = a.size();
    std::vector<std::vector<bool>> c(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (a[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (b[k][j]) c[i][j] = true;
    return c;
}

}  // namespace

double log_big(const BigInt& x) {
    if (x <= 0) return -HUGE_VAL;
    const std::size_t bits = boost::multiprecision::msb(x);
    if (bits < 1000) return std::log(x.convert_to<double>());
    const std::size_t shift = bits - 60;
    const BigInt top = x >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

Sft::Sft(AlphabetPtr alphabet, std::vector<Word> labels, AdjacencyMatrix adjacency, std::size_t block_length)
    : alphabet_(std::move(alphabet)), block_length_(block_length) {
    const std::size_t n = adjacency.size();
    std::vector<bool> alive(n, true);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            bool in = false, out = false;
            for (std::size_t j = 0; j < n; ++j) {
                if (!alive[j]) continue;
                out = out || adjacency[i][j];
                in = in || adjacency[j][i];
            }
            if (!in || !out) {
                alive[i] = false;
                changed = true;
            }
        }
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (alive[i]) keep.push_back(i);
    if (keep.empty()) throw InvalidArgument("empty subshift: no bi-infinite sequence avoids the constraints");
    adjacency_.assign(keep.size(), std::vector<std::uint8_t>(keep.size(), 0));
    for (std::size_t a = 0; a < keep.size(); ++a) {
        labels_.push_back(std::move(labels[keep[a]]));
        for (std::size_t b = 0; b < keep.size(); ++b) adjacency_[a][b] = adjacency[keep[a]][keep[b]] ? 1 : 0;
    }
}

Sft Sft::from_matrix(AlphabetPtr alphabet, const AdjacencyMatrix& matrix) {
    const std::size_t r = alphabet->size();
    if (matrix.size() != r) throw InvalidArgument("adjacency matrix size must match the alphabet");
    for (const auto& row : matrix) {
        if (row.size() != r) throw InvalidArgument("adjacency matrix must be square");
        for (auto v : row)
            if (v > 1) throw InvalidArgument("adjacency matrix entries must be 0 or 1");
    }
    std::vector<Word> labels;
    for (std::size_t s = 0; s < r; ++s) labels.emplace_back(alphabet, std::vector<Symbol>{static_cast<Symbol>(s)});
    return Sft(std::move(alphabet), std::move(labels), matrix, 1);
}

Sft Sft::from_forbidden_words(AlphabetPtr alphabet, const std::vector<Word>& forbidden) {
    std::size_t m = 0;
    std::vector<std::string> bad;
    for (const auto& f : forbidden) {
        if (f.empty()) throw InvalidArgument("forbidden words must be nonempty");
        if (f.alphabet() != *alphabet) throw InvalidArgument("forbidden word uses a different alphabet");
        m = std::max(m, f.size());
        bad.emplace_back(f.bytes());
    }
    const std::size_t r = alphabet->size();
    const std::size_t k = std::max<std::size_t>(m, 2) - 1;
    double states = std::pow(static_cast<double>(r), static_cast<double>(k));
    if (states > static_cast<double>(kMaxRecodedStates))
        throw ResourceError("recoding would need more than 2^20 states");

    std::vector<std::string> blocks;
    std::string cur(k, '\0');
    for (std::size_t code = 0; code < static_cast<std::size_t>(states); ++code) {
        std::size_t c = code;
        for (std::size_t i = k; i-- > 0;) {
            cur[i] = static_cast<char>(c % r);
            c /= r;
        }
        if (!contains_forbidden(cur, bad)) blocks.push_back(cur);
    }
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < blocks.size(); ++i) index.emplace(blocks[i], i);

    AdjacencyMatrix adj(blocks.size(), std::vector<std::uint8_t>(blocks.size(), 0));
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (std::size_t a = 0; a < r; ++a) {
            const std::string ext = blocks[i] + static_cast<char>(a);
            if (contains_forbidden(ext, bad)) continue;
            auto it = index.find(ext.substr(1));
            if (it != index.end()) adj[i][it->second] = 1;
        }
    }
    std::vector<Word> labels;
    for (const auto& b : blocks) labels.emplace_back(alphabet, std::vector<Symbol>(b.begin(), b.end()));
    return Sft(std::move(alphabet), std::move(labels), std::move(adj), k);
}

Sft Sft::full_shift(std::size_t r) {
    if (r < 1 || r > 10) throw InvalidArgument("full shift size must be in 1..10");
    std::string labels;
    for (std::size_t i = 0; i < r; ++i) labels += static_cast<char>('0' + i);
    return from_matrix(Alphabet::from_labels(labels), AdjacencyMatrix(r, std::vector<std::uint8_t>(r, 1)));
}

Sft Sft::named(std::string_view name) {
    if (name == "golden") return from_matrix(Alphabet::binary(), {{1, 1}, {1, 0}});
    if (name == "full2") return full_shift(2);
    if (name == "full3") return full_shift(3);
    if (name == "period2") return from_matrix(Alphabet::binary(), {{0, 1}, {1, 0}});
    if (name == "figI") return from_matrix(Alphabet::from_labels("012"), {{1, 1, 0}, {0, 0, 1}, {1, 1, 0}});
    if (name == "figII") return from_matrix(Alphabet::from_labels("012"), {{0, 1, 1}, {1, 0, 1}, {1, 0, 0}});
    throw InvalidArgument("unknown subshift '" + std::string(name) +
                          "' (expected golden, full2, full3, period2, figI or figII)");
}

Sft Sft::from_json(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("invalid subshift JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("alphabet")) throw InvalidArgument("subshift JSON needs an \"alphabet\"");
    try {
        auto alphabet = alphabet_from_json(j.at("alphabet"));
        if (j.contains("matrix")) return from_matrix(alphabet, j.at("matrix").get<AdjacencyMatrix>());
        if (j.contains("state_matrix")) {
            const auto k = j.at("block_length").get<std::size_t>();
            std::vector<Word> labels;
            for (const auto& t : j.at("states")) labels.push_back(Word::parse(t.get<std::string>(), alphabet));
            auto matrix = j.at("state_matrix").get<AdjacencyMatrix>();
            if (k == 0 || matrix.size() != labels.size()) throw InvalidArgument("state_matrix must match the states");
            for (std::size_t a = 0; a < labels.size(); ++a) {
                if (labels[a].size() != k) throw InvalidArgument("every state must have block_length symbols");
                if (matrix[a].size() != labels.size()) throw InvalidArgument("state_matrix must be square");
                for (std::size_t b = 0; b < labels.size(); ++b) {
                    if (matrix[a][b] > 1) throw InvalidArgument("state_matrix entries must be 0 or 1");
                    if (matrix[a][b] && labels[a].bytes(1, k - 1) != labels[b].bytes(0, k - 1))
                        throw InvalidArgument("state_matrix joins non-overlapping blocks");
                }
            }
            return Sft(alphabet, std::move(labels), std::move(matrix), k);
        }
        if (j.contains("forbidden")) {
            std::vector<Word> words;
            for (const auto& f : j.at("forbidden")) words.push_back(Word::parse(f.get<std::string>(), alphabet));
            return from_forbidden_words(alphabet, words);
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("invalid subshift JSON: ") + e.what());
    }
    throw InvalidArgument("subshift JSON needs \"matrix\", \"forbidden\" or \"state_matrix\"");
}

Sft Sft::resolve(std::string_view name_or_json) {
    const auto pos = name_or_json.find_first_not_of(" \t\r\n");
    if (pos != std::string_view::npos && name_or_json[pos] == '{') return from_json(name_or_json);
    return named(name_or_json);
}

std::string Sft::to_json() const {
    nlohmann::json j;
    std::vector<std::string> alphabet;
    for (std::size_t s = 0; s < alphabet_->size(); ++s)
        alphabet.push_back(detail::utf8_encode(alphabet_->label(static_cast<Symbol>(s))));
    j["alphabet"] = alphabet;
    if (is_memory_one()) {
        AdjacencyMatrix full(alphabet_->size(), std::vector<std::uint8_t>(alphabet_->size(), 0));
        for (std::size_t a = 0; a < state_count(); ++a)
            for (std::size_t b = 0; b < state_count(); ++b) full[first_symbol(a)][first_symbol(b)] = adjacency_[a][b];
        j["matrix"] = full;
    } else {
        std::vector<std::string> states;
        for (const auto& w : labels_) states.push_back(w.to_string());
        j["block_length"] = block_length_;
        j["states"] = states;
        j["state_matrix"] = adjacency_;
    }
    return j.dump();
}

CoordinateSet::CoordinateSet(std::size_t horizon, std::vector<std::size_t> members)
    : horizon_(horizon), members_(std::move(members)) {
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i] >= horizon_) throw InvalidArgument("coordinate outside the horizon");
        if (i > 0 && members_[i] <= members_[i - 1]) throw InvalidArgument("coordinates must be strictly increasing");
    }
}

CoordinateSet CoordinateSet::from_mask(std::size_t horizon, std::uint64_t mask) {
    if (horizon > 64) throw InvalidArgument("mask horizon must be at most 64");
    if (horizon < 64 && (mask >> horizon) != 0) throw InvalidArgument("mask has bits beyond the horizon");
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < horizon; ++i)
        if ((mask >> i) & 1U) members.push_back(i);
    return CoordinateSet(horizon, std::move(members));
}

CoordinateSet CoordinateSet::interval(std::size_t horizon, std::size_t start, std::size_t length) {
    std::vector<std::size_t> members(length);
    std::iota(members.begin(), members.end(), start);
    return CoordinateSet(horizon, std::move(members));
}

bool CoordinateSet::contains(std::size_t i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
}

CoordinateSet CoordinateSet::complement() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < horizon_; ++i)
        if (!contains(i)) out.push_back(i);
    return CoordinateSet(horizon_, std::move(out));
}

std::vector<std::pair<std::size_t, std::size_t>> CoordinateSet::intervals() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i : members_) {
        if (!out.empty() && out.back().first + out.back().second == i)
            ++out.back().second;
        else
            out.emplace_back(i, 1);
    }
    return out;
}

BigInt count_blocks(const Sft& x, std::size_t n) {
    if (n == 0) return 1;
    const std::size_t k = x.block_length();
    const std::size_t m = x.state_count();
    if (n < k) {
        std::unordered_set<std::string_view> prefixes;
        for (std::size_t s = 0; s < m; ++s) prefixes.insert(x.state_label(s).bytes(0, n));
        return prefixes.size();
    }
    std::vector<BigInt> v(m, 1), next(m);
    for (std::size_t step = k; step < n; ++step) {
        for (std::size_t i = 0; i < m; ++i) {
            next[i] = 0;
            for (std::size_t j = 0; j < m; ++j)
                if (x.allowed(i, j)) next[i] += v[j];
        }
        v.swap(next);
    }
    BigInt total = 0;
    for (const auto& c : v) total += c;
    return total;
}

FactorSet enumerate_blocks(const Sft& x, std::size_t n) {
    FactorSet out;
    out.n = n;
    const std::size_t k = x.block_length();
    std::vector<std::vector<Symbol>> words;
    if (n < k) {
        std::set<std::vector<Symbol>> prefixes;
        for (std::size_t s = 0; s < x.state_count(); ++s) {
            auto sym = x.state_label(s).symbols();
            prefixes.emplace(sym.begin(), sym.begin() + static_cast<long>(n));
        }
        words.assign(prefixes.begin(), prefixes.end());
    } else {
        std::vector<Symbol> cur;
        auto extend = [&](auto&& self, std::size_t state) -> void {
            if (cur.size() == n) {
                words.push_back(cur);
                return;
            }
            for (std::size_t t = 0; t < x.state_count(); ++t) {
                if (!x.allowed(state, t)) continue;
                cur.push_back(x.state_label(t)[k - 1]);
                self(self, t);
                cur.pop_back();
            }
        };
        for (std::size_t s = 0; s < x.state_count(); ++s) {
            auto sym = x.state_label(s).symbols();
            cur.assign(sym.begin(), sym.end());
            extend(extend, s);
        }
        std::sort(words.begin(), words.end());
    }
    for (auto& w : words) out.factors.emplace_back(x.alphabet_ptr(), std::move(w));
    return out;
}

namespace {

BigInt pattern_count_interval(const Sft& x, const CoordinateSet& s) {
    if (!x.is_memory_one() || !is_power_positive(x, 2))
        throw PreconditionError("interval product needs a memory-one subshift with M^2 > 0");
    BigInt total = 1;
    for (auto [start, length] : s.intervals()) total *= count_blocks(x, length);
    return total;
}

BigInt pattern_count_transfer(const Sft& x, const CoordinateSet& s) {
    if (s.empty()) return 1;
    const std::size_t horizon = s.members().back() + 1;
    const std::size_t k = x.block_length();
    const std::size_t m = x.state_count();
    const std::size_t words = (m + 63) / 64;

    std::map<StateSet, BigInt> current;
    {
        const std::size_t head = std::min(k, horizon);
        std::map<std::vector<Symbol>, StateSet> groups;
        for (std::size_t st = 0; st < m; ++st) {
            std::vector<Symbol> key;
            for (std::size_t i = 0; i < head; ++i)
                if (s.contains(i)) key.push_back(x.state_label(st)[i]);
            auto [it, inserted] = groups.try_emplace(std::move(key), StateSet(words, 0));
            set_bit(it->second, st);
        }
        if (horizon <= k) return groups.size();
        for (auto& [key, set] : groups) current[set] += 1;
    }
    for (std::size_t pos = k; pos < horizon; ++pos) {
        const bool observed = s.contains(pos);
        std::map<StateSet, BigInt> next;
        for (const auto& [set, count] : current) {
            StateSet succ(words, 0);
            for (std::size_t i = 0; i < m; ++i) {
                if (!((set[i / 64] >> (i % 64)) & 1U)) continue;
                for (std::size_t j = 0; j < m; ++j)
                    if (x.allowed(i, j)) set_bit(succ, j);
            }
            if (!observed) {
                next[succ] += count;
                continue;
            }
            std::map<Symbol, StateSet> by_symbol;
            for (std::size_t j = 0; j < m; ++j) {
                if (!((succ[j / 64] >> (j % 64)) & 1U)) continue;
                auto [it, inserted] = by_symbol.try_emplace(x.state_label(j)[k - 1], StateSet(words, 0));
                set_bit(it->second, j);
            }
            for (const auto& [sym, sub] : by_symbol)
                if (any_bit(sub)) next[sub] += count;
        }
        current.swap(next);
    }
    BigInt total = 0;
    for (const auto& [set, count] : current) total += count;
    return total;
}

}  // namespace

BigInt pattern_count(const Sft& x, const CoordinateSet& s, PatternMethod method) {
    if (s.empty()) return 1;
    switch (method) {
        case PatternMethod::IntervalProduct:
            return pattern_count_interval(x, s);
        case PatternMethod::Transfer:
            return pattern_count_transfer(x, s);
        case PatternMethod::Enumerate: {
            PatternEnumerator e(x, s.members().back() + 1);
            return e.count(s);
        }
        case PatternMethod::Auto:
            break;
    }
    if (x.is_memory_one() && is_power_positive(x, 2)) return pattern_count_interval(x, s);
    return pattern_count_transfer(x, s);
}

PatternEnumerator::PatternEnumerator(const Sft& x, std::size_t horizon)
    : horizon_(horizon), radix_(x.alphabet().size()) {
    const BigInt total = count_blocks(x, horizon);
    if (BigInt(total * std::max<std::size_t>(horizon, 1)) > BigInt(static_cast<std::uint64_t>(kEnumerationBudget)))
        throw ResourceError("enumerating " + total.str() + " words of length " + std::to_string(horizon) +
                            " exceeds the enumeration budget");
    for (const auto& w : enumerate_blocks(x, horizon).factors) {
        auto sym = w.symbols();
        words_.insert(words_.end(), sym.begin(), sym.end());
    }
}

std::size_t PatternEnumerator::count(const CoordinateSet& s) {
    if (s.empty()) return 1;
    if (s.members().back() >= horizon_) throw InvalidArgument("coordinate set reaches beyond the enumeration horizon");
    const std::size_t n_words = word_count();
    const auto& idx = s.members();
    const double space = std::pow(static_cast<double>(radix_), static_cast<double>(idx.size()));

    auto key_of = [&](std::size_t w) {
        std::uint64_t key = 0;
        const Symbol* row = words_.data() + w * horizon_;
        for (std::size_t i : idx) key = key * radix_ + row[i];
        return key;
    };

    if (space <= static_cast<double>(1U << 24)) {
        if (stamp_.size() < static_cast<std::size_t>(space)) stamp_.assign(static_cast<std::size_t>(space), 0);
        if (++generation_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            generation_ = 1;
        }
        std::size_t distinct = 0;
        for (std::size_t w = 0; w < n_words; ++w) {
            auto& slot = stamp_[key_of(w)];
            if (slot != generation_) {
                slot = generation_;
                ++distinct;
            }
        }
        return distinct;
    }
    if (space < 1.8e19) {
        std::vector<std::uint64_t> keys(n_words);
        for (std::size_t w = 0; w < n_words; ++w) keys[w] = key_of(w);
        std::sort(keys.begin(), keys.end());
        return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
    }
    std::unordered_set<std::string> seen;
    std::string key(idx.size(), '\0');
    for (std::size_t w = 0; w < n_words; ++w) {
        const Symbol* row = words_.data() + w * horizon_;
        for (std::size_t i = 0; i < idx.size(); ++i) key[i] = static_cast<char>(row[idx[i]]);
        seen.insert(key);
    }
    return seen.size();
}

double entropy(const Sft& x) {
    const std::size_t m = x.state_count();
    std::vector<double> v(m, 1.0), w(m);
    double lo = 0.0, hi = 0.0;
    for (int iter = 0; iter < 1000000; ++iter) {
        for (std::size_t i = 0; i < m; ++i) {
            double sum = v[i];
            for (std::size_t j = 0; j < m; ++j)
                if (x.allowed(i, j)) sum += v[j];
            w[i] = sum;
        }
        lo = HUGE_VAL;
        hi = 0.0;
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double ratio = w[i] / v[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            norm = std::max(norm, w[i]);
        }
        for (std::size_t i = 0; i < m; ++i) v[i] = w[i] / norm;
        if (hi - lo <= 1e-12 * lo) break;
    }
    return std::log(0.5 * (lo + hi) - 1.0);
}

bool is_power_positive(const Sft& x, std::size_t k) {
    if (k == 0) throw InvalidArgument("power must be positive");
    const std::size_t m = x.state_count();
    std::vector<std::vector<bool>> a(m, std::vector<bool>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a[i][j] = x.allowed(i, j);
    auto p = a;
    for (std::size_t e = 1; e < k; ++e) p = boolean_product(p, a);
    for (const auto& row : p)
        for (bool b : row)
            if (!b) return false;
    return true;
}

DeBruijnGraph de_bruijn_graph(const Sft& x, std::size_t n) {
    if (n == 0) throw InvalidArgument("de Bruijn graph order must be at least 1");
    DeBruijnGraph g;
    g.n = n;
    g.vertices = enumerate_blocks(x, n - 1).factors;
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < g.vertices.size(); ++i) index.emplace(g.vertices[i].bytes(), i);
    for (const auto& w : enumerate_blocks(x, n).factors)
        g.edges.emplace_back(index.at(w.bytes(0, n - 1)), index.at(w.bytes(1, n - 1)));
    return g;
}

bool is_irreducible(const DeBruijnGraph& g) {
    const std::size_t m = g.vertices.size();
    if (m == 0) return false;
    std::vector<std::vector<std::size_t>> fwd(m), bwd(m);
    for (auto [a, b] : g.edges) {
        fwd[a].push_back(b);
        bwd[b].push_back(a);
    }
    auto reaches_all = [m](const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<bool> seen(m, false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        std::size_t visited = 1;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (auto u : adj[v])
                if (!seen[u]) {
                    seen[u] = true;
                    ++visited;
                    stack.push_back(u);
                }
        }
        return visited == m;
    };
    return reaches_all(fwd) && reaches_all(bwd);
}

}  // namespace symdyn
