#include "table_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <vector>

#include "graph.hpp"

namespace graphknn {

std::string format_distance(Weight d) {
    char buf[64];
    if (std::rint(d) == d && std::fabs(d) <= 0x1p53) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(d));
        return std::string(buf, end);
    }
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, end);
}

void write_table(std::ostream& os, const KnnTable& table) {
    for (Vertex v = 0; v < table.rows.size(); ++v) {
        const auto& row = table.rows[v];
        for (std::size_t rank = 0; rank < row.size(); ++rank)
            os << v << '\t' << rank << '\t' << row[rank].source << '\t'
               << format_distance(row[rank].distance) << '\n';
    }
}

std::string table_to_tsv(const KnnTable& table) {
    std::ostringstream os;
    write_table(os, table);
    return os.str();
}

namespace {

struct Line {
    std::string_view text;
    std::size_t number;  // 1-based position in the input
};

std::vector<Line> significant_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    while (!text.empty()) {
        std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        ++number;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        out.push_back({line, number});
    }
    return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        std::size_t begin = line.find_first_not_of(" \t", pos);
        if (begin == std::string_view::npos) break;
        std::size_t end = line.find_first_of(" \t", begin);
        if (end == std::string_view::npos) end = line.size();
        fields.push_back(line.substr(begin, end - begin));
        pos = end;
    }
    return fields;
}

std::uint64_t parse_uint(std::string_view field, std::size_t line, const char* what) {
    std::uint64_t value = 0;
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || end != field.data() + field.size())
        throw ParseError(line, std::string("bad ") + what + " '" + std::string(field) + "'");
    return value;
}

Weight parse_distance(std::string_view field, std::size_t line) {
    double value = 0.0;
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || end != field.data() + field.size() || !std::isfinite(value) ||
        value < 0.0)
        throw ParseError(line, "bad distance '" + std::string(field) + "'");
    return value;
}

}  // namespace

KnnTable parse_table(std::string_view text, Vertex n, std::uint32_t k) {
    KnnTable table;
    table.k = k;
    table.rows.resize(n);
    // (previous vertex, its next rank); entries must arrive in serialization
    // order so that parse(write(t)) == t and nothing else parses equal.
    std::uint64_t prev_vertex = 0;
    std::uint64_t next_rank = 0;
    for (const Line& line : significant_lines(text)) {
        auto fields = split_fields(line.text);
        if (fields.size() != 4)
            throw ParseError(line.number, "expected 4 fields, got " +
                                              std::to_string(fields.size()));
        std::uint64_t v = parse_uint(fields[0], line.number, "vertex");
        std::uint64_t rank = parse_uint(fields[1], line.number, "rank");
        std::uint64_t source = parse_uint(fields[2], line.number, "source");
        Weight dist = parse_distance(fields[3], line.number);
        if (v >= n) throw ParseError(line.number, "vertex id out of range");
        if (source >= n) throw ParseError(line.number, "source id out of range");
        if (v != prev_vertex) {
            if (v < prev_vertex) throw ParseError(line.number, "vertex ids out of order");
            prev_vertex = v;
            next_rank = 0;
        }
        if (rank != next_rank)
            throw ParseError(line.number, "expected rank " + std::to_string(next_rank));
        if (rank >= k) throw ParseError(line.number, "row longer than k");
        ++next_rank;
        table.rows[v].push_back({static_cast<Vertex>(source), dist});
    }
    return table;
}

}  // namespace graphknn
