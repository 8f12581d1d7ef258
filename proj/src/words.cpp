#include "symdyn/words.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "palindrome_tree.hpp"
#include "symdyn/error.hpp"

namespace symdyn {

namespace detail {

std::string utf8_encode(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
}

std::vector<char32_t> utf8_decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        int extra = 0;
        char32_t cp = 0;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            extra = 1;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            extra = 2;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            extra = 3;
        } else {
            throw InvalidArgument("malformed UTF-8 input");
        }
        if (i + extra >= s.size() && extra > 0) throw InvalidArgument("truncated UTF-8 sequence");
        for (int k = 1; k <= extra; ++k) {
            const auto b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) throw InvalidArgument("malformed UTF-8 input");
            cp = (cp << 6) | (b & 0x3F);
        }
        out.push_back(cp);
        i += 1 + extra;
    }
    return out;
}

}  // namespace detail

Alphabet::Alphabet(std::vector<char32_t> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw InvalidArgument("alphabet must have at least one symbol");
    if (labels_.size() > kMaxAlphabetSize) throw InvalidArgument("alphabet has more than 256 symbols");
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidArgument("alphabet labels must be distinct");
}

AlphabetPtr Alphabet::from_labels(std::string_view utf8) {
    return std::make_shared<const Alphabet>(detail::utf8_decode(utf8));
}

AlphabetPtr Alphabet::binary() {
    static const AlphabetPtr kBinary = from_labels("01");
    return kBinary;
}

std::optional<Symbol> Alphabet::index_of(char32_t label) const noexcept {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<Symbol>(i);
    return std::nullopt;
}

std::string Alphabet::to_utf8() const {
    std::string out;
    for (char32_t c : labels_) out += detail::utf8_encode(c);
    return out;
}

Word::Word() : alphabet_(Alphabet::binary()) {}

Word::Word(AlphabetPtr alphabet, std::vector<Symbol> data)
    : alphabet_(std::move(alphabet)), data_(std::move(data)) {
    if (!alphabet_) throw InvalidArgument("word needs an alphabet");
    for (Symbol s : data_)
        if (s >= alphabet_->size()) throw InvalidArgument("symbol index outside the alphabet");
}

Word Word::parse(std::string_view utf8, AlphabetPtr alphabet) {
    std::vector<Symbol> data;
    for (char32_t c : detail::utf8_decode(utf8)) {
        auto idx = alphabet->index_of(c);
        if (!idx) throw InvalidArgument("label '" + detail::utf8_encode(c) + "' is not in the alphabet");
        data.push_back(*idx);
    }
    return Word(std::move(alphabet), std::move(data));
}

Word Word::parse(std::string_view utf8) {
    auto cps = detail::utf8_decode(utf8);
    auto labels = cps;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (labels.empty()) return Word();
    auto alphabet = std::make_shared<const Alphabet>(labels);
    std::vector<Symbol> data;
    data.reserve(cps.size());
    for (char32_t c : cps) data.push_back(*alphabet->index_of(c));
    return Word(std::move(alphabet), std::move(data));
}

std::string_view Word::bytes() const noexcept {
    return {reinterpret_cast<const char*>(data_.data()), data_.size()};
}

std::string_view Word::bytes(std::size_t pos, std::size_t len) const noexcept {
    return bytes().substr(pos, len);
}

Word Word::substr(std::size_t pos, std::size_t len) const {
    if (pos > data_.size()) throw InvalidArgument("substring start beyond word end");
    len = std::min(len, data_.size() - pos);
    return Word(alphabet_, std::vector<Symbol>(data_.begin() + static_cast<long>(pos),
                                               data_.begin() + static_cast<long>(pos + len)));
}

std::string Word::to_string() const {
    std::string out;
    out.reserve(data_.size());
    for (Symbol s : data_) out += detail::utf8_encode(alphabet_->label(s));
    return out;
}

bool operator==(const Word& a, const Word& b) {
    return a.data_ == b.data_ && (a.alphabet_ == b.alphabet_ || *a.alphabet_ == *b.alphabet_);
}

bool operator<(const Word& a, const Word& b) { return a.data_ < b.data_; }

bool FactorSet::contains(const Word& w) const {
    return std::find(factors.begin(), factors.end(), w) != factors.end();
}

FactorSet factors(const Word& w, std::size_t n) {
    FactorSet out;
    out.n = n;
    if (n > w.size()) {
        out.window_exceeds_word = true;
        return out;
    }
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i + n <= w.size(); ++i) {
        if (seen.insert(w.bytes(i, n)).second) out.factors.push_back(w.substr(i, n));
    }
    return out;
}

std::size_t count_factors(const Word& w, std::size_t n) {
    if (n > w.size()) return 0;
    std::unordered_set<std::string_view> seen;
    seen.reserve(w.size() - n + 1);
    for (std::size_t i = 0; i + n <= w.size(); ++i) seen.insert(w.bytes(i, n));
    return seen.size();
}

std::vector<std::size_t> complexity_profile(const Word& w, std::size_t n_max) {
    if (n_max > w.size()) throw InvalidArgument("n_max exceeds word length");
    std::vector<std::size_t> out;
    out.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) out.push_back(count_factors(w, n));
    return out;
}

Word reversal(const Word& w) {
    auto s = w.symbols();
    return Word(w.alphabet_ptr(), std::vector<Symbol>(s.rbegin(), s.rend()));
}

bool is_palindrome(const Word& w) {
    auto s = w.symbols();
    return std::equal(s.begin(), s.begin() + static_cast<long>(s.size() / 2), s.rbegin());
}

std::vector<Word> palindromic_factors(const Word& w, bool include_empty) {
    detail::PalindromeTree tree(w.symbols());
    std::vector<Word> out;
    if (include_empty) out.push_back(Word(w.alphabet_ptr(), {}));
    for (auto [len, end] : tree.palindromes()) out.push_back(w.substr(end + 1 - len, len));
    return out;
}

std::size_t palindrome_count(const Word& w) {
    return detail::PalindromeTree(w.symbols()).distinct() + 1;
}

bool is_rich(const Word& w) { return palindrome_count(w) == w.size() + 1; }

bool is_rich_by_prefix_test(const Word& w) {
    const auto s = w.bytes();
    for (std::size_t end = 1; end <= s.size(); ++end) {
        const auto prefix = s.substr(0, end);
        bool found = false;
        for (std::size_t len = 1; len <= end && !found; ++len) {
            const auto suffix = prefix.substr(end - len);
            if (!std::equal(suffix.begin(), suffix.end(), suffix.rbegin())) continue;
            std::size_t occurrences = 0;
            for (std::size_t pos = prefix.find(suffix); pos != std::string_view::npos;
                 pos = prefix.find(suffix, pos + 1))
                ++occurrences;
            found = occurrences == 1;
        }
        if (!found) return false;
    }
    return true;
}

std::size_t longest_rich_prefix(const Word& w) {
    detail::PalindromeTree tree(w.symbols());
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!tree.created_at(i)) return i;
    return w.size();
}

bool is_balanced(const Word& w, std::size_t n_max) {
    if (w.alphabet().size() != 2) throw InvalidArgument("balance is defined for binary alphabets only");
    const auto s = w.symbols();
    std::vector<std::size_t> ones(s.size() + 1, 0);
    for (std::size_t i = 0; i < s.size(); ++i) ones[i + 1] = ones[i] + s[i];
    for (std::size_t n = 1; n <= std::min(n_max, s.size()); ++n) {
        std::size_t lo = n, hi = 0;
        for (std::size_t i = 0; i + n <= s.size(); ++i) {
            const std::size_t c = ones[i + n] - ones[i];
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        if (hi - lo > 1) return false;
    }
    return true;
}

std::vector<BlockFrequency> block_frequencies(const Word& w, std::size_t k) {
    if (k > w.size() || k == 0) throw InvalidArgument("block length must be in 1..|w|");
    const std::size_t windows = w.size() - k + 1;
    std::unordered_map<std::string_view, std::size_t> index;
    std::vector<BlockFrequency> out;
    std::vector<std::size_t> counts;
    for (std::size_t i = 0; i < windows; ++i) {
        auto [it, inserted] = index.emplace(w.bytes(i, k), out.size());
        if (inserted) {
            out.push_back({w.substr(i, k), 0.0});
            counts.push_back(0);
        }
        ++counts[it->second];
    }
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j].frequency = static_cast<double>(counts[j]) / static_cast<double>(windows);
    return out;
}

double block_frequency(const Word& w, const Word& block) {
    const std::size_t k = block.size();
    if (k == 0 || k > w.size()) return 0.0;
    const auto needle = block.bytes();
    std::size_t hits = 0;
    for (std::size_t i = 0; i + k <= w.size(); ++i)
        if (w.bytes(i, k) == needle) ++hits;
    return static_cast<double>(hits) / static_cast<double>(w.size() - k + 1);
}

}  // namespace symdyn
