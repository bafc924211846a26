#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "knn_types.hpp"

namespace graphknn {

// Brute-force ground truth. Deliberately shares no queue code with the fast
// engine: plain std::priority_queue with lazy deletion, so a bug in the
// addressable-heap machinery cannot hide in its own verification.

// First min(limit, reachable) vertices settled by single-source Dijkstra
// from `source`, in ascending (distance, vertex id) order. limit >= 1.
std::vector<std::pair<Vertex, Weight>> truncated_dijkstra(const Graph& g,
                                                          Vertex source,
                                                          std::size_t limit);

// Exact k-nearest-sources table: one full Dijkstra on the transpose per
// vertex, optionally filtered to `terminals`. Theta(n (m + n log n)); meant
// for verification at small n. threads <= 1 runs serially.
KnnTable brute_force_knn(const Graph& g, std::uint32_t k,
                         std::optional<std::span<const Vertex>> terminals = {},
                         unsigned threads = 1);

}  // namespace graphknn
