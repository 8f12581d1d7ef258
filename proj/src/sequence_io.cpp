#include "symdyn/sequence_io.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {
constexpr std::string_view kHeader = "#alphabet:";
}

std::vector<Word> read_sequences(std::istream& in) {
    std::vector<Word> out;
    AlphabetPtr alphabet;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first && line.starts_with(kHeader)) {
            alphabet = Alphabet::from_labels(std::string_view(line).substr(kHeader.size()));
            first = false;
            continue;
        }
        first = false;
        if (line.empty()) continue;
        if (line.front() == '#') throw InvalidArgument("unexpected comment line in sequence file: " + line);
        out.push_back(alphabet ? Word::parse(line, alphabet) : Word::parse(line));
    }
    return out;
}

void write_sequence(std::ostream& out, const Word& w, bool with_header) {
    if (with_header) out << kHeader << w.alphabet().to_utf8() << '\n';
    out << w.to_string() << '\n';
}

}  // namespace symdyn
