#include "graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

namespace graphknn {

Graph Graph::from_edges(Vertex n, std::span<const EdgeRecord> edges) {
    for (const EdgeRecord& e : edges) {
        if (e.from >= n || e.to >= n)
            throw std::invalid_argument("edge endpoint out of range [0, n)");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw std::invalid_argument("edge weight must be positive and finite");
    }
    Graph g;
    g.n_ = n;
    g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const EdgeRecord& e : edges) ++g.offsets_[e.from + 1];
    for (std::size_t u = 1; u <= n; ++u) g.offsets_[u] += g.offsets_[u - 1];
    g.heads_.resize(edges.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // Stable placement keeps the input order within each adjacency list.
    for (const EdgeRecord& e : edges)
        g.heads_[cursor[e.from]++] = EdgeTo{e.to, e.weight};
    return g;
}

Graph Graph::reversed() const {
    std::vector<EdgeRecord> rev;
    rev.reserve(heads_.size());
    for (Vertex u = 0; u < n_; ++u)
        for (const EdgeTo& e : out(u)) rev.push_back({e.to, u, e.weight});
    return from_edges(n_, rev);
}

std::vector<EdgeRecord> Graph::edges() const {
    std::vector<EdgeRecord> result;
    result.reserve(heads_.size());
    for (Vertex u = 0; u < n_; ++u)
        for (const EdgeTo& e : out(u)) result.push_back({u, e.to, e.weight});
    return result;
}

namespace {

struct Line {
    std::size_t number = 0;  // 1-based
    std::string_view text;
};

// Splits into lines, strips trailing '\r', drops blank lines.
std::vector<Line> significant_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    while (!text.empty()) {
        ++number;
        std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        lines.push_back({number, line});
    }
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

std::uint64_t parse_uint(std::string_view field, std::size_t line, const char* what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(line, std::string("malformed ") + what + " '" + std::string(field) + "'");
    return value;
}

double parse_weight(std::string_view field, std::size_t line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(line, "malformed weight '" + std::string(field) + "'");
    if (!std::isfinite(value))
        throw ParseError(line, "weight must be finite");
    if (!(value > 0.0))
        throw ParseError(line, "non-positive weight " + std::string(field));
    return value;
}

Vertex check_vertex(std::uint64_t id, std::uint64_t n, std::size_t line) {
    if (id >= n)
        throw ParseError(line, "vertex id " + std::to_string(id) + " out of range [0, " +
                                   std::to_string(n) + ")");
    return static_cast<Vertex>(id);
}

Graph parse_edgelist(std::string_view text) {
    std::vector<Line> lines = significant_lines(text);
    std::size_t i = 0;
    auto is_comment = [](const Line& l) {
        return l.text[l.text.find_first_not_of(" \t")] == '#';
    };
    while (i < lines.size() && is_comment(lines[i])) ++i;
    if (i == lines.size()) throw ParseError(lines.empty() ? 1 : lines.back().number, "missing 'n m' header");

    auto header = split_fields(lines[i].text);
    if (header.size() != 2)
        throw ParseError(lines[i].number, "header must be 'n m'");
    std::uint64_t n = parse_uint(header[0], lines[i].number, "vertex count");
    std::uint64_t m = parse_uint(header[1], lines[i].number, "edge count");
    if (n > std::numeric_limits<Vertex>::max())
        throw ParseError(lines[i].number, "vertex count too large");
    ++i;

    std::vector<EdgeRecord> edges;
    edges.reserve(m);
    for (; i < lines.size(); ++i) {
        if (is_comment(lines[i])) continue;
        auto fields = split_fields(lines[i].text);
        if (fields.size() != 3)
            throw ParseError(lines[i].number, "edge line must be 'u v w'");
        if (edges.size() == m)
            throw ParseError(lines[i].number, "more than the declared " + std::to_string(m) + " edges");
        Vertex u = check_vertex(parse_uint(fields[0], lines[i].number, "vertex id"), n, lines[i].number);
        Vertex v = check_vertex(parse_uint(fields[1], lines[i].number, "vertex id"), n, lines[i].number);
        edges.push_back({u, v, parse_weight(fields[2], lines[i].number)});
    }
    if (edges.size() != m)
        throw ParseError(lines.empty() ? 1 : lines.back().number,
                         "declared " + std::to_string(m) + " edges, found " +
                             std::to_string(edges.size()));
    return Graph::from_edges(static_cast<Vertex>(n), edges);
}

Graph parse_dimacs(std::string_view text) {
    std::vector<Line> lines = significant_lines(text);
    bool have_problem = false;
    std::uint64_t n = 0, m = 0;
    std::vector<EdgeRecord> edges;
    std::size_t last_line = lines.empty() ? 1 : lines.back().number;

    for (const Line& l : lines) {
        auto fields = split_fields(l.text);
        std::string_view tag = fields[0];
        if (tag == "c") continue;
        if (tag == "p") {
            if (have_problem) throw ParseError(l.number, "duplicate problem line");
            if (fields.size() != 4 || fields[1] != "sp")
                throw ParseError(l.number, "problem line must be 'p sp n m'");
            n = parse_uint(fields[2], l.number, "vertex count");
            m = parse_uint(fields[3], l.number, "edge count");
            if (n > std::numeric_limits<Vertex>::max())
                throw ParseError(l.number, "vertex count too large");
            have_problem = true;
            edges.reserve(m);
            continue;
        }
        if (tag == "a") {
            if (!have_problem)
                throw ParseError(l.number, "arc before 'p sp' line");
            if (fields.size() != 4)
                throw ParseError(l.number, "arc line must be 'a u v w'");
            if (edges.size() == m)
                throw ParseError(l.number, "more than the declared " + std::to_string(m) + " arcs");
            std::uint64_t u1 = parse_uint(fields[1], l.number, "vertex id");
            std::uint64_t v1 = parse_uint(fields[2], l.number, "vertex id");
            if (u1 < 1 || u1 > n || v1 < 1 || v1 > n)
                throw ParseError(l.number, "vertex id out of range [1, " + std::to_string(n) + "]");
            std::uint64_t w = parse_uint(fields[3], l.number, "weight");
            if (w == 0) throw ParseError(l.number, "non-positive weight 0");
            edges.push_back({static_cast<Vertex>(u1 - 1), static_cast<Vertex>(v1 - 1),
                             static_cast<Weight>(w)});
            continue;
        }
        throw ParseError(l.number, "unrecognized line type '" + std::string(tag) + "'");
    }
    if (!have_problem) throw ParseError(last_line, "missing 'p sp n m' line");
    if (edges.size() != m)
        throw ParseError(last_line, "declared " + std::to_string(m) + " arcs, found " +
                                        std::to_string(edges.size()));
    return Graph::from_edges(static_cast<Vertex>(n), edges);
}

}  // namespace

Format detect_format(std::string_view text) {
    for (const Line& l : significant_lines(text)) {
        char c = l.text[l.text.find_first_not_of(" \t")];
        return (c == 'c' || c == 'p') ? Format::dimacs : Format::edgelist;
    }
    return Format::edgelist;
}

Graph parse_graph(std::string_view text, Format format) {
    return format == Format::dimacs ? parse_dimacs(text) : parse_edgelist(text);
}

namespace {

// Unbiased bounded draw from a fixed-sequence engine; avoids
// std::uniform_int_distribution, whose output differs across stdlibs.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

}  // namespace

Graph random_graph(Vertex n, std::size_t m, std::uint64_t weight_min,
                   std::uint64_t weight_max, std::uint64_t seed) {
    if (weight_min < 1 || weight_min > weight_max)
        throw std::invalid_argument("weight range must satisfy 1 <= min <= max");
    std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0);
    if (m > max_edges)
        throw std::invalid_argument("requested " + std::to_string(m) + " edges, graph on " +
                                    std::to_string(n) + " vertices holds at most " +
                                    std::to_string(max_edges));
    std::mt19937_64 rng(seed);
    std::uint64_t weight_span = weight_max - weight_min + 1;
    std::vector<EdgeRecord> edges;
    edges.reserve(m);
    if (max_edges > 0 && m > max_edges / 2) {
        // Dense request: shuffle the full pair universe instead of rejection
        // sampling.
        std::vector<std::pair<Vertex, Vertex>> pairs;
        pairs.reserve(max_edges);
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = 0; v < n; ++v)
                if (u != v) pairs.emplace_back(u, v);
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t j = i + static_cast<std::size_t>(draw_below(rng, pairs.size() - i));
            std::swap(pairs[i], pairs[j]);
            Weight w = static_cast<Weight>(weight_min + draw_below(rng, weight_span));
            edges.push_back({pairs[i].first, pairs[i].second, w});
        }
    } else {
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(m * 2);
        while (edges.size() < m) {
            Vertex u = static_cast<Vertex>(draw_below(rng, n));
            Vertex v = static_cast<Vertex>(draw_below(rng, n));
            if (u == v) continue;
            std::uint64_t code = (static_cast<std::uint64_t>(u) << 32) | v;
            if (!seen.insert(code).second) continue;
            Weight w = static_cast<Weight>(weight_min + draw_below(rng, weight_span));
            edges.push_back({u, v, w});
        }
    }
    return Graph::from_edges(n, edges);
}

}  // namespace graphknn
