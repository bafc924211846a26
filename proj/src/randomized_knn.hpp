#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "graph.hpp"
#include "knn_types.hpp"

namespace graphknn {

// Monte Carlo alternative to the fast engine: t independent random vertex
// samples, one multi-source Dijkstra per sample, candidates pooled and the
// k smallest kept per vertex. Every emitted entry is an exact distance; a
// failing run can only omit entries, and the failure probability is at
// most n^-(confidence-2).

// Rounds needed for the per-pair failure bound n^-confidence:
// ceil(10 * confidence * k * ln n). Requires n >= 2, k >= 1, confidence >= 3.
std::uint64_t round_count(std::uint64_t n, std::uint32_t k, std::uint32_t confidence);

// Membership of `vertex` in sampling round `round` at rate 1/k: a pure
// function of (seed, round, vertex), so rounds can run in any order or
// concurrently and still see the same samples.
bool in_sample(std::uint64_t seed, std::uint64_t round, Vertex vertex, std::uint32_t k);

struct NearestSource {
    Vertex source;
    Weight dist;
};

// For each vertex v, the source u in `sources` minimizing (dist(u->v), u),
// or nothing when no source reaches v. Seeding every source at distance 0
// is equivalent to the textbook zero-weight super-source construction
// without needing a zero-weight edge. An empty source set yields all-none.
std::vector<std::optional<NearestSource>> multi_source_dijkstra(
    const Graph& g, std::span<const Vertex> sources);

// The full sampling algorithm. Reproducible: output is a function of
// (g, k, confidence, seed) only; `threads` distributes rounds without
// changing the result.
KnnTable randomized_knn(const Graph& g, std::uint32_t k, std::uint32_t confidence,
                        std::uint64_t seed, unsigned threads = 1);

}  // namespace graphknn
