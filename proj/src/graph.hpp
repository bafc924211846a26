#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "knn_types.hpp"

namespace graphknn {

struct EdgeTo {
    Vertex to;
    Weight weight;
};

struct EdgeRecord {
    Vertex from;
    Vertex to;
    Weight weight;
};

// Immutable directed graph with strictly positive finite edge weights.
// Adjacency is CSR-packed; the per-vertex edge order is the input order.
// Self-loops and parallel edges are allowed. Safe to share across threads
// once constructed.
class Graph {
public:
    Graph() = default;

    // Validates ids and weights; throws std::invalid_argument on violation.
    static Graph from_edges(Vertex n, std::span<const EdgeRecord> edges);

    Vertex vertex_count() const { return n_; }
    std::size_t edge_count() const { return heads_.size(); }

    std::span<const EdgeTo> out(Vertex u) const {
        return {heads_.data() + offsets_[u], heads_.data() + offsets_[u + 1]};
    }

    // Transpose: every edge (u, v, w) becomes (v, u, w).
    Graph reversed() const;

    // All edges as (from, to, weight) records, grouped by source vertex.
    std::vector<EdgeRecord> edges() const;

private:
    Vertex n_ = 0;
    std::vector<std::size_t> offsets_;  // size n_ + 1
    std::vector<EdgeTo> heads_;
};

enum class Format { edgelist, dimacs };

// Parse failure with the 1-based line number of the offending input line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// DIMACS if the first marker character is 'c' or 'p', edgelist otherwise.
Format detect_format(std::string_view text);

Graph parse_graph(std::string_view text, Format format);

// Seeded G(n, m): m distinct directed non-loop edges chosen uniformly,
// integer weights uniform in [weight_min, weight_max]. The sequence is
// fixed by the seed and does not depend on the platform's stdlib.
Graph random_graph(Vertex n, std::size_t m, std::uint64_t weight_min,
                   std::uint64_t weight_max, std::uint64_t seed);

}  // namespace graphknn
