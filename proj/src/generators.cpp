#include "symdyn/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

using Matrix = std::vector<std::vector<std::uint64_t>>;

BigInt floor_of(const BigRational& x) {
    BigInt num = boost::multiprecision::numerator(x);
    BigInt den = boost::multiprecision::denominator(x);
    BigInt q = num / den;
    if (num < 0 && q * den != num) --q;
    return q;
}

BigInt ceil_of(const BigRational& x) {
    BigInt f = floor_of(x);
    return BigRational(f) == x ? f : f + 1;
}

std::int64_t parse_int(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidArgument("expected an integer, got '" + std::string(s) + "'");
    return v;
}

std::vector<std::int64_t> parse_int_list(std::string_view s) {
    std::vector<std::int64_t> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        auto comma = s.find(',', start);
        out.push_back(parse_int(s.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

Matrix multiply_saturating(const Matrix& a, const Matrix& b) {
    constexpr std::uint64_t kCap = std::uint64_t{1} << 31;
    const std::size_t n = a.size();
    Matrix c(n, std::vector<std::uint64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                c[i][j] = std::min(kCap, c[i][j] + std::min(kCap, a[i][k]) * std::min(kCap, b[k][j]));
    return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Substitution

Substitution::Substitution(AlphabetPtr alphabet, std::vector<std::vector<Symbol>> images)
    : alphabet_(std::move(alphabet)), images_(std::move(images)) {
    if (images_.size() != alphabet_->size())
        throw InvalidArgument("substitution needs exactly one image per symbol");
    for (const auto& img : images_) {
        if (img.empty()) throw InvalidArgument("substitution images must be nonempty");
        for (Symbol s : img)
            if (s >= alphabet_->size()) throw InvalidArgument("image symbol outside the alphabet");
    }
}

Substitution Substitution::from_labels(const std::map<std::string, std::string>& images) {
    std::vector<char32_t> labels;
    for (const auto& [key, _] : images) {
        auto cps = detail::utf8_decode(key);
        if (cps.size() != 1) throw InvalidArgument("substitution keys must be single symbols");
        labels.push_back(cps.front());
    }
    std::sort(labels.begin(), labels.end());
    auto alphabet = std::make_shared<const Alphabet>(labels);
    std::vector<std::vector<Symbol>> data(alphabet->size());
    for (const auto& [key, value] : images) {
        const Symbol s = *alphabet->index_of(detail::utf8_decode(key).front());
        auto w = Word::parse(value, alphabet);
        data[s].assign(w.symbols().begin(), w.symbols().end());
    }
    return Substitution(std::move(alphabet), std::move(data));
}

Word Substitution::apply(const Word& w) const {
    std::vector<Symbol> out;
    for (Symbol s : w.symbols()) out.insert(out.end(), images_[s].begin(), images_[s].end());
    return Word(alphabet_, std::move(out));
}

std::vector<std::vector<std::uint64_t>> Substitution::incidence_matrix() const {
    const std::size_t r = alphabet_->size();
    Matrix m(r, std::vector<std::uint64_t>(r, 0));
    for (std::size_t b = 0; b < r; ++b)
        for (Symbol a : images_[b]) ++m[a][b];
    return m;
}

Word fixed_point(const Substitution& s, Symbol seed, std::size_t length) {
    if (seed >= s.alphabet().size()) throw InvalidArgument("seed symbol outside the alphabet");
    const auto& img = s.image(seed);
    if (img.front() != seed)
        throw InvalidArgument("seed is not prolongable: its image does not begin with the seed");
    if (img.size() < 2)
        throw InvalidArgument("seed is not prolongable: its image has length < 2");
    if (length == 0) throw InvalidArgument("fixed point length must be at least 1");
    Word w(s.alphabet_ptr(), {seed});
    while (w.size() < length) w = s.apply(w.prefix(length));
    return w.prefix(length);
}

std::optional<std::size_t> primitivity_exponent(const Substitution& s, std::size_t m_max) {
    const std::size_t r = s.alphabet().size();
    // letters[a] = set of symbols occurring in theta^m(a)
    std::vector<std::vector<bool>> one(r, std::vector<bool>(r, false));
    for (std::size_t a = 0; a < r; ++a)
        for (Symbol b : s.image(static_cast<Symbol>(a))) one[a][b] = true;
    auto letters = one;
    for (std::size_t m = 1; m <= m_max; ++m) {
        bool all = true;
        for (std::size_t a = 0; a < r && all; ++a)
            all = std::all_of(letters[a].begin(), letters[a].end(), [](bool v) { return v; });
        if (all) return m;
        std::vector<std::vector<bool>> next(r, std::vector<bool>(r, false));
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b)
                if (letters[a][b])
                    for (std::size_t c = 0; c < r; ++c)
                        if (one[b][c]) next[a][c] = true;
        letters = std::move(next);
    }
    return std::nullopt;
}

bool is_primitive(const Substitution& s, std::size_t m_max) {
    if (m_max == 0) throw InvalidArgument("m_max must be at least 1");
    return primitivity_exponent(s, m_max).has_value();
}

bool is_primitive_by_matrix(const Substitution& s, std::size_t m_max) {
    if (m_max == 0) throw InvalidArgument("m_max must be at least 1");
    const Matrix m = s.incidence_matrix();
    Matrix power = m;
    for (std::size_t k = 1; k <= m_max; ++k) {
        bool positive = true;
        for (const auto& row : power)
            for (auto v : row) positive = positive && v > 0;
        if (positive) return true;
        power = multiply_saturating(power, m);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Continued fractions and exact reals

ContinuedFraction::ContinuedFraction(std::vector<std::int64_t> terms, std::vector<std::int64_t> period)
    : terms_(std::move(terms)), period_(std::move(period)) {
    if (terms_.empty() && period_.empty()) throw InvalidArgument("continued fraction has no terms");
    if (terms_.empty()) throw InvalidArgument("continued fraction needs the integer part a0");
    if (terms_.front() < 0) throw InvalidArgument("negative integer part is not supported");
    for (std::size_t k = 1; k < terms_.size(); ++k)
        if (terms_[k] <= 0) throw InvalidArgument("continued fraction terms after a0 must be positive");
    for (auto t : period_)
        if (t <= 0) throw InvalidArgument("continued fraction period terms must be positive");
}

ContinuedFraction ContinuedFraction::from_rational(const BigRational& x) {
    if (x < 0) throw InvalidArgument("negative values are not supported");
    std::vector<std::int64_t> terms;
    BigInt num = boost::multiprecision::numerator(x);
    BigInt den = boost::multiprecision::denominator(x);
    while (den != 0) {
        BigInt q = num / den;
        if (q > std::numeric_limits<std::int64_t>::max())
            throw InvalidArgument("continued fraction term overflows 64 bits");
        terms.push_back(static_cast<std::int64_t>(q));
        BigInt r = num - q * den;
        num = den;
        den = r;
    }
    return ContinuedFraction(std::move(terms));
}

ContinuedFraction ContinuedFraction::parse(std::string_view text) {
    const auto semi = text.find(';');
    if (semi == std::string_view::npos) return ContinuedFraction(parse_int_list(text));
    return ContinuedFraction(parse_int_list(text.substr(0, semi)), parse_int_list(text.substr(semi + 1)));
}

std::size_t ContinuedFraction::length() const noexcept {
    return period_.empty() ? terms_.size() : std::numeric_limits<std::size_t>::max();
}

std::int64_t ContinuedFraction::term(std::size_t k) const {
    if (k < terms_.size()) return terms_[k];
    if (period_.empty()) throw InvalidArgument("continued fraction term index out of range");
    return period_[(k - terms_.size()) % period_.size()];
}

BigRational ContinuedFraction::convergent(std::size_t k) const {
    if (k >= length()) throw InvalidArgument("convergent index beyond a finite expansion");
    BigInt p_prev = 1, q_prev = 0, p = term(0), q = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        const BigInt a = term(i);
        BigInt p_next = a * p + p_prev;
        BigInt q_next = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    return BigRational(p, q);
}

BigRational ContinuedFraction::value() const {
    if (!is_finite()) throw InvalidArgument("infinite continued fraction has no rational value");
    return convergent(terms_.size() - 1);
}

double ContinuedFraction::approximate() const {
    const std::size_t k = is_finite() ? terms_.size() - 1 : terms_.size() + 4 * period_.size() + 40;
    return convergent(k).convert_to<double>();
}

ExactReal ExactReal::from_double(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("real parameter must be finite");
    int exponent = 0;
    const double mantissa = std::frexp(x, &exponent);
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    BigRational value(scaled);
    const int shift = exponent - 53;
    if (shift >= 0) {
        value *= BigRational(BigInt(1) << shift);
    } else {
        value /= BigRational(BigInt(1) << -shift);
    }
    return from_rational(value);
}

ExactReal ExactReal::from_rational(BigRational x) {
    ExactReal r;
    r.exact_ = std::move(x);
    return r;
}

ExactReal ExactReal::from_continued_fraction(ContinuedFraction cf) {
    if (cf.is_finite()) return from_rational(cf.value());
    ExactReal r;
    r.cf_ = std::move(cf);
    return r;
}

std::pair<BigRational, BigRational> ExactReal::bracket(std::size_t level) const {
    if (exact_) return {*exact_, *exact_};
    BigRational a = cf_->convergent(level);
    BigRational b = cf_->convergent(level + 1);
    if (b < a) std::swap(a, b);
    return {a, b};
}

std::size_t ExactReal::level_for_denominator(const BigInt& denominator) const {
    if (exact_) return 0;
    for (std::size_t k = 0;; ++k)
        if (boost::multiprecision::denominator(cf_->convergent(k)) > denominator) return k;
}

double ExactReal::approximate() const {
    return exact_ ? exact_->convert_to<double>() : cf_->approximate();
}

// ---------------------------------------------------------------------------
// Mechanical and standard words

Word mechanical(const ExactReal& alpha, const ExactReal& beta, std::size_t length,
                MechanicalVariant variant) {
    if (length == 0) throw InvalidArgument("length must be at least 1");
    for (const ExactReal* p : {&alpha, &beta}) {
        auto [lo, hi] = p->bracket(p->is_exact() ? 0 : p->level_for_denominator(1));
        if (lo < 0 || hi > 1) throw InvalidArgument("slope and intercept must lie in [0,1]");
    }
    const BigInt target = BigInt(length) + 1;
    std::size_t level_a = alpha.level_for_denominator(target);
    std::size_t level_b = beta.level_for_denominator(target);
    constexpr std::size_t kMaxRefinements = 200;
    for (std::size_t attempt = 0; attempt < kMaxRefinements; ++attempt, ++level_a, ++level_b) {
        const auto [a_lo, a_hi] = alpha.bracket(level_a);
        const auto [b_lo, b_hi] = beta.bracket(level_b);
        std::vector<BigInt> edge;
        edge.reserve(length + 1);
        bool determined = true;
        for (std::size_t m = 0; m <= length && determined; ++m) {
            const BigRational lo = a_lo * m + b_lo;
            const BigRational hi = a_hi * m + b_hi;
            BigInt f_lo = variant == MechanicalVariant::Lower ? floor_of(lo) : ceil_of(lo);
            BigInt f_hi = variant == MechanicalVariant::Lower ? floor_of(hi) : ceil_of(hi);
            if (f_lo != f_hi) {
                determined = false;
            } else {
                edge.push_back(std::move(f_lo));
            }
        }
        if (!determined) continue;
        std::vector<Symbol> data(length);
        for (std::size_t n = 0; n < length; ++n) {
            const BigInt step = edge[n + 1] - edge[n];
            data[n] = step == 0 ? 0 : 1;
        }
        return Word(Alphabet::binary(), std::move(data));
    }
    throw InvalidArgument("could not determine mechanical word exactly (slope/intercept on a lattice line)");
}

DirectiveSequence DirectiveSequence::from_continued_fraction(const ContinuedFraction& cf, std::size_t count) {
    if (cf.term(0) != 0) throw InvalidArgument("characteristic word needs 0 < alpha < 1 (a0 = 0)");
    DirectiveSequence d;
    const std::size_t available = cf.length() == std::numeric_limits<std::size_t>::max() ? count + 1
                                                                                          : cf.length();
    for (std::size_t k = 1; k <= count && k < available; ++k) {
        const auto a = cf.term(k);
        if (a <= 0) throw InvalidArgument("continued fraction has a zero tail entry");
        d.d.push_back(static_cast<std::uint64_t>(k == 1 ? a - 1 : a));
    }
    return d;
}

void DirectiveSequence::validate() const {
    for (std::size_t k = 1; k < d.size(); ++k)
        if (d[k] == 0) throw InvalidArgument("directive entries after the first must be positive");
}

std::vector<Word> standard_sequence_terms(const DirectiveSequence& d) {
    d.validate();
    auto binary = Alphabet::binary();
    std::vector<std::vector<Symbol>> s{{1}, {0}};
    for (auto dn : d.d) {
        const auto& prev = s[s.size() - 1];
        const auto& prev2 = s[s.size() - 2];
        std::vector<Symbol> next;
        next.reserve(prev.size() * dn + prev2.size());
        for (std::uint64_t k = 0; k < dn; ++k) next.insert(next.end(), prev.begin(), prev.end());
        next.insert(next.end(), prev2.begin(), prev2.end());
        s.push_back(std::move(next));
    }
    std::vector<Word> out;
    out.reserve(s.size());
    for (auto& v : s) out.emplace_back(binary, std::move(v));
    return out;
}

Word standard_sequence(const DirectiveSequence& d) { return standard_sequence_terms(d).back(); }

Word characteristic_word(const ContinuedFraction& cf, std::size_t length) {
    if (cf.term(0) != 0) throw InvalidArgument("characteristic word needs 0 < alpha < 1 (a0 = 0)");
    if (length == 0) throw InvalidArgument("length must be at least 1");
    std::vector<Symbol> prev2{1}, prev{0};
    for (std::size_t k = 1;; ++k) {
        if (k >= cf.length())
            throw InvalidArgument("continued fraction too short for the requested length; add terms or a period");
        const auto a = cf.term(k);
        if (a <= 0) throw InvalidArgument("continued fraction has a zero tail entry");
        const auto dn = static_cast<std::uint64_t>(k == 1 ? a - 1 : a);
        if (k > 1 && dn == 0) throw InvalidArgument("continued fraction has a zero tail entry");
        std::vector<Symbol> next;
        for (std::uint64_t j = 0; j < dn; ++j) next.insert(next.end(), prev.begin(), prev.end());
        next.insert(next.end(), prev2.begin(), prev2.end());
        prev2 = std::move(prev);
        prev = std::move(next);
        // s_n for n >= 1 is a prefix of the limit word.
        if (prev.size() >= length) {
            prev.resize(length);
            return Word(Alphabet::binary(), std::move(prev));
        }
    }
}

// ---------------------------------------------------------------------------
// Named sequences

namespace {

Word kolakoski(std::size_t length) {
    std::vector<Symbol> runs{1, 2, 2};
    for (std::size_t i = 2; runs.size() < length; ++i) {
        const Symbol next = runs.back() == 1 ? 2 : 1;
        for (Symbol k = 0; k < runs[i]; ++k) runs.push_back(next);
    }
    runs.resize(length);
    for (auto& s : runs) s = static_cast<Symbol>(s - 1);
    return Word(Alphabet::from_labels("12"), std::move(runs));
}

Word champernowne_binary(std::size_t length) {
    std::vector<Symbol> out;
    out.reserve(length + 64);
    for (std::uint64_t k = 1; out.size() < length; ++k) {
        int top = 63;
        while (((k >> top) & 1u) == 0) --top;
        for (int b = top; b >= 0; --b) out.push_back(static_cast<Symbol>((k >> b) & 1u));
    }
    out.resize(length);
    return Word(Alphabet::binary(), std::move(out));
}

const Substitution& named_substitution(std::string_view name) {
    static const Substitution fibonacci = Substitution::from_labels({{"0", "01"}, {"1", "0"}});
    static const Substitution morse = Substitution::from_labels({{"0", "01"}, {"1", "10"}});
    static const Substitution chacon = Substitution::from_labels({{"0", "0010"}, {"1", "1"}});
    if (name == "fibonacci") return fibonacci;
    if (name == "morse") return morse;
    return chacon;
}

}  // namespace

Word named_sequence(std::string_view name, std::size_t length, std::string_view block) {
    if (length == 0) throw InvalidArgument("length must be at least 1");
    if (name == "fibonacci" || name == "morse" || name == "chacon")
        return fixed_point(named_substitution(name), 0, length);
    if (name == "kolakoski") return kolakoski(length);
    if (name == "champernowne_binary") return champernowne_binary(length);
    if (name == "periodic") {
        if (block.empty()) throw InvalidArgument("periodic sequence needs a nonempty block");
        const Word b = Word::parse(block);
        std::vector<Symbol> out(length);
        for (std::size_t i = 0; i < length; ++i) out[i] = b[i % b.size()];
        return Word(b.alphabet_ptr(), std::move(out));
    }
    throw InvalidArgument("unknown sequence name '" + std::string(name) + "'");
}

WordGenerator named_generator(std::string name, std::string block) {
    named_sequence(name, 1, block);  // validate eagerly
    return [name = std::move(name), block = std::move(block)](std::size_t length) {
        return named_sequence(name, length, block);
    };
}

// ---------------------------------------------------------------------------
// Generator specs

GeneratorSpec generator_spec_from_json(std::string_view json_text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("generator spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("generator spec needs a \"kind\"");
    GeneratorSpec spec;
    const auto kind = j.at("kind").get<std::string>();
    auto read_cf = [&]() -> std::optional<ContinuedFraction> {
        if (!j.contains("cf")) return std::nullopt;
        std::vector<std::int64_t> period;
        if (j.contains("cf_period")) period = j.at("cf_period").get<std::vector<std::int64_t>>();
        return ContinuedFraction(j.at("cf").get<std::vector<std::int64_t>>(), std::move(period));
    };
    try {
        if (kind == "named" || kind == "periodic") {
            spec.kind = GeneratorSpec::Kind::Named;
            spec.name = kind == "periodic" ? "periodic" : j.at("name").get<std::string>();
            if (j.contains("block")) spec.block = j.at("block").get<std::string>();
        } else if (kind == "substitution") {
            spec.kind = GeneratorSpec::Kind::Substitution;
            spec.images = j.at("images").get<std::map<std::string, std::string>>();
            spec.seed = j.at("seed").get<std::string>();
        } else if (kind == "mechanical") {
            spec.kind = GeneratorSpec::Kind::Mechanical;
            if (j.contains("alpha")) spec.alpha = j.at("alpha").get<double>();
            spec.cf = read_cf();
            if (!spec.alpha && !spec.cf) throw InvalidArgument("mechanical spec needs \"alpha\" or \"cf\"");
            spec.beta = j.value("beta", 0.0);
            const auto variant = j.value("variant", std::string("lower"));
            if (variant != "lower" && variant != "upper")
                throw InvalidArgument("variant must be \"lower\" or \"upper\"");
            spec.variant = variant == "lower" ? MechanicalVariant::Lower : MechanicalVariant::Upper;
        } else if (kind == "characteristic") {
            spec.kind = GeneratorSpec::Kind::Characteristic;
            spec.cf = read_cf();
            if (!spec.cf) throw InvalidArgument("characteristic spec needs \"cf\"");
        } else if (kind == "standard") {
            spec.kind = GeneratorSpec::Kind::Standard;
            spec.directive = j.at("directive").get<std::vector<std::uint64_t>>();
        } else {
            throw InvalidArgument("unknown generator kind '" + kind + "'");
        }
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("bad generator spec: ") + e.what());
    }
    return spec;
}

std::string generator_spec_to_json(const GeneratorSpec& spec) {
    using nlohmann::json;
    json j;
    auto write_cf = [&] {
        if (!spec.cf) return;
        j["cf"] = spec.cf->terms();
        if (!spec.cf->period().empty()) j["cf_period"] = spec.cf->period();
    };
    switch (spec.kind) {
        case GeneratorSpec::Kind::Named:
            j["kind"] = "named";
            j["name"] = spec.name;
            if (!spec.block.empty()) j["block"] = spec.block;
            break;
        case GeneratorSpec::Kind::Substitution:
            j["kind"] = "substitution";
            j["images"] = spec.images;
            j["seed"] = spec.seed;
            break;
        case GeneratorSpec::Kind::Mechanical:
            j["kind"] = "mechanical";
            if (spec.alpha) j["alpha"] = *spec.alpha;
            write_cf();
            j["beta"] = spec.beta;
            j["variant"] = spec.variant == MechanicalVariant::Lower ? "lower" : "upper";
            break;
        case GeneratorSpec::Kind::Characteristic:
            j["kind"] = "characteristic";
            write_cf();
            break;
        case GeneratorSpec::Kind::Standard:
            j["kind"] = "standard";
            j["directive"] = spec.directive;
            break;
    }
    return j.dump();
}

WordGenerator make_generator(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorSpec::Kind::Named:
            return named_generator(spec.name, spec.block);
        case GeneratorSpec::Kind::Substitution: {
            auto sub = Substitution::from_labels(spec.images);
            const auto seed_cp = detail::utf8_decode(spec.seed);
            if (seed_cp.size() != 1) throw InvalidArgument("seed must be a single symbol");
            const auto seed = sub.alphabet().index_of(seed_cp.front());
            if (!seed) throw InvalidArgument("seed is not in the substitution alphabet");
            fixed_point(sub, *seed, 1);
            return [sub = std::move(sub), s = *seed](std::size_t n) { return fixed_point(sub, s, n); };
        }
        case GeneratorSpec::Kind::Mechanical: {
            const ExactReal alpha = spec.cf ? ExactReal::from_continued_fraction(*spec.cf)
                                            : ExactReal::from_double(*spec.alpha);
            const ExactReal beta = ExactReal::from_double(spec.beta);
            const auto variant = spec.variant;
            return [alpha, beta, variant](std::size_t n) { return mechanical(alpha, beta, n, variant); };
        }
        case GeneratorSpec::Kind::Characteristic: {
            const ContinuedFraction cf = *spec.cf;
            return [cf](std::size_t n) { return characteristic_word(cf, n); };
        }
        case GeneratorSpec::Kind::Standard: {
            const Word s = standard_sequence(DirectiveSequence{spec.directive});
            return [s](std::size_t n) {
                if (n > s.size()) throw InvalidArgument("requested length exceeds the standard word");
                return s.prefix(n);
            };
        }
    }
    throw InvalidArgument("unhandled generator kind");
}

}  // namespace symdyn
