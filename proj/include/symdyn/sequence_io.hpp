#ifndef SYMDYN_SEQUENCE_IO_HPP
#define SYMDYN_SEQUENCE_IO_HPP

#include <iosfwd>
#include <vector>

#include "symdyn/words.hpp"

namespace symdyn {

// Sequence files: UTF-8 text, one sequence per line, one character per
// symbol, with an optional first line "#alphabet:<labels>". Without the
// header each line's alphabet is the sorted set of its labels.

std::vector<Word> read_sequences(std::istream& in);

void write_sequence(std::ostream& out, const Word& w, bool with_header = false);

}  // namespace symdyn

#endif
