#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "knn_types.hpp"

namespace graphknn {

// Shortest decimal that round-trips to `d`; integer-valued distances print
// without a decimal point (so exact integer-weight runs stay diff-friendly).
std::string format_distance(Weight d);

// One line per entry, "v<TAB>rank<TAB>source<TAB>distance", ascending
// (vertex, rank), ranks contiguous from 0. Vertices with empty rows emit
// nothing, so deserialization needs n and k from context.
void write_table(std::ostream& os, const KnnTable& table);
std::string table_to_tsv(const KnnTable& table);

// Strict inverse of table_to_tsv for a table over n vertices with budget k.
// Throws ParseError (line-numbered) on malformed, out-of-range, misordered,
// or over-long input; write/parse round-trips losslessly.
KnnTable parse_table(std::string_view text, Vertex n, std::uint32_t k);

}  // namespace graphknn
