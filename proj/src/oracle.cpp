#include "oracle.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "parallel.hpp"

namespace graphknn {

std::vector<std::pair<Vertex, Weight>> truncated_dijkstra(const Graph& g,
                                                          Vertex source,
                                                          std::size_t limit) {
    if (limit < 1) throw std::invalid_argument("limit must be >= 1");
    if (source >= g.vertex_count()) throw std::invalid_argument("source out of range");

    // (distance, vertex) pairs compare lexicographically, which is exactly
    // the canonical settle order.
    using Item = std::pair<Weight, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    std::vector<Weight> dist(g.vertex_count(), std::numeric_limits<Weight>::infinity());
    std::vector<char> settled(g.vertex_count(), 0);
    std::vector<std::pair<Vertex, Weight>> order;

    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty() && order.size() < limit) {
        auto [d, u] = heap.top();
        heap.pop();
        if (settled[u]) continue;  // stale entry
        settled[u] = 1;
        order.emplace_back(u, d);
        for (const EdgeTo& e : g.out(u)) {
            if (d + e.weight < dist[e.to]) {
                dist[e.to] = d + e.weight;
                heap.push({dist[e.to], e.to});
            }
        }
    }
    return order;
}

KnnTable brute_force_knn(const Graph& g, std::uint32_t k,
                         std::optional<std::span<const Vertex>> terminals,
                         unsigned threads) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    std::vector<char> is_terminal;
    if (terminals) {
        is_terminal.assign(g.vertex_count(), 0);
        for (Vertex t : *terminals) {
            if (t >= g.vertex_count())
                throw std::invalid_argument("terminal id out of range");
            is_terminal[t] = 1;
        }
    }

    KnnTable table;
    table.k = k;
    table.rows.resize(g.vertex_count());
    if (g.vertex_count() == 0) return table;

    const Graph rev = g.reversed();
    run_chunked(g.vertex_count(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t v = begin; v < end; ++v) {
            // dist(u -> v) in g equals dist(v -> u) in the transpose.
            auto reach = truncated_dijkstra(rev, static_cast<Vertex>(v), rev.vertex_count());
            std::vector<NeighborEntry>& row = table.rows[v];
            for (const auto& [u, d] : reach) {
                if (terminals && !is_terminal[u]) continue;
                row.push_back({u, d});
                if (row.size() == k) break;
            }
            // Settle order is already (distance, id) ascending; keep the k
            // smallest, which is what the truncation above did.
        }
    });
    return table;
}

}  // namespace graphknn
