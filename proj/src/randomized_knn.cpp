#include "randomized_knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

#include "parallel.hpp"

namespace graphknn {

std::uint64_t round_count(std::uint64_t n, std::uint32_t k, std::uint32_t confidence) {
    if (n < 2) throw std::invalid_argument("round_count: need at least 2 vertices");
    if (k < 1) throw std::invalid_argument("round_count: k must be positive");
    if (confidence < 3) throw std::invalid_argument("round_count: confidence must be >= 3");
    double rounds = 10.0 * static_cast<double>(confidence) * static_cast<double>(k) *
                    std::log(static_cast<double>(n));
    return static_cast<std::uint64_t>(std::ceil(rounds));
}

namespace {

// splitmix64 finalizer: a bijective mixer, so distinct (seed, round, vertex)
// triples give independent-looking draws.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

bool in_sample(std::uint64_t seed, std::uint64_t round, Vertex vertex, std::uint32_t k) {
    if (k < 1) throw std::invalid_argument("in_sample: k must be positive");
    std::uint64_t h = mix64(mix64(mix64(seed) ^ round) ^ vertex);
    // Top 53 bits as a uniform draw in [0, 1); keep with probability 1/k.
    double u = static_cast<double>(h >> 11) * 0x1p-53;
    return u * static_cast<double>(k) < 1.0;
}

namespace {

constexpr Weight kInf = std::numeric_limits<Weight>::infinity();

struct HeapItem {
    Weight dist;
    Vertex origin;
    Vertex vertex;
};

bool operator>(const HeapItem& a, const HeapItem& b) {
    if (a.dist != b.dist) return a.dist > b.dist;
    if (a.origin != b.origin) return a.origin > b.origin;
    return a.vertex > b.vertex;
}

// Scratch for repeated multi-source runs on one graph. `touched` remembers
// which labels left their initial state so reset costs O(|touched|), not O(n).
class MultiSourceWorkspace {
public:
    explicit MultiSourceWorkspace(const Graph& g)
        : g_(g),
          dist_(g.vertex_count(), kInf),
          origin_(g.vertex_count(), 0),
          settled_(g.vertex_count(), 0) {}

    // Labels each vertex with the (dist, origin) pair that is minimal under
    // canonical_less over all sources; unreachable vertices keep dist == inf.
    void run(std::span<const Vertex> sources) {
        for (Vertex v : touched_) {
            dist_[v] = kInf;
            settled_[v] = 0;
        }
        touched_.clear();
        std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;
        for (Vertex s : sources) {
            if (s >= g_.vertex_count())
                throw std::invalid_argument("multi_source_dijkstra: source out of range");
            if (dist_[s] == 0.0) continue;  // duplicate source id
            dist_[s] = 0.0;
            origin_[s] = s;
            touched_.push_back(s);
            heap.push({0.0, s, s});
        }
        while (!heap.empty()) {
            HeapItem top = heap.top();
            heap.pop();
            if (settled_[top.vertex] || dist_[top.vertex] != top.dist ||
                origin_[top.vertex] != top.origin)
                continue;  // lazy deletion: label improved since this push
            settled_[top.vertex] = 1;
            for (const EdgeTo& e : g_.out(top.vertex)) {
                Weight nd = top.dist + e.weight;
                bool better =
                    nd < dist_[e.to] ||
                    (nd == dist_[e.to] && !settled_[e.to] && top.origin < origin_[e.to]);
                if (!better) continue;
                if (dist_[e.to] == kInf) touched_.push_back(e.to);
                dist_[e.to] = nd;
                origin_[e.to] = top.origin;
                heap.push({nd, top.origin, e.to});
            }
        }
    }

    Weight dist(Vertex v) const { return dist_[v]; }
    Vertex origin(Vertex v) const { return origin_[v]; }

private:
    const Graph& g_;
    std::vector<Weight> dist_;
    std::vector<Vertex> origin_;
    std::vector<char> settled_;
    std::vector<Vertex> touched_;
};

}  // namespace

std::vector<std::optional<NearestSource>> multi_source_dijkstra(
    const Graph& g, std::span<const Vertex> sources) {
    MultiSourceWorkspace ws(g);
    ws.run(sources);
    std::vector<std::optional<NearestSource>> out(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (ws.dist(v) != kInf) out[v] = NearestSource{ws.origin(v), ws.dist(v)};
    return out;
}

KnnTable randomized_knn(const Graph& g, std::uint32_t k, std::uint32_t confidence,
                        std::uint64_t seed, unsigned threads) {
    if (k < 1) throw std::invalid_argument("randomized_knn: k must be positive");
    if (confidence < 3)
        throw std::invalid_argument("randomized_knn: confidence must be >= 3");
    const Vertex n = g.vertex_count();
    KnnTable table;
    table.k = k;
    table.rows.resize(n);
    if (n == 0) return table;
    if (n == 1) {
        table.rows[0].push_back({0, 0.0});
        return table;
    }

    const std::uint64_t rounds = round_count(n, k, confidence);
    // One candidate pool per vertex and chunk, keyed by source so repeat
    // sightings of a source across rounds collapse; merged in chunk order so
    // the result does not depend on `threads`.
    using Pool = std::map<Vertex, Weight>;
    const std::size_t chunks =
        std::clamp<std::size_t>(threads <= 1 ? 1 : threads, 1, rounds);
    std::vector<std::vector<Pool>> partial(chunks);

    run_chunked_indexed(rounds, chunks, [&](std::size_t chunk, std::size_t begin,
                                            std::size_t end) {
        std::vector<Pool>& pools = partial[chunk];
        pools.resize(n);
        MultiSourceWorkspace ws(g);
        std::vector<Vertex> sample;
        for (std::size_t round = begin; round < end; ++round) {
            sample.clear();
            for (Vertex v = 0; v < n; ++v)
                if (in_sample(seed, round, v, k)) sample.push_back(v);
            if (sample.empty()) continue;
            ws.run(sample);
            for (Vertex v = 0; v < n; ++v) {
                if (ws.dist(v) == kInf) continue;
                auto [it, inserted] = pools[v].emplace(ws.origin(v), ws.dist(v));
                // Each run labels v with an exact shortest-path distance, so
                // two sightings of one source must agree.
                GKNN_CHECK(inserted || it->second == ws.dist(v),
                           "randomized candidate distance mismatch");
            }
        }
    });

    std::vector<NeighborEntry> candidates;
    for (Vertex v = 0; v < n; ++v) {
        Pool merged = std::move(partial[0][v]);
        for (std::size_t c = 1; c < chunks; ++c) {
            for (const auto& [source, d] : partial[c][v]) {
                auto [it, inserted] = merged.emplace(source, d);
                GKNN_CHECK(inserted || it->second == d,
                           "randomized candidate distance mismatch");
            }
        }
        candidates.clear();
        candidates.reserve(merged.size());
        for (const auto& [source, d] : merged) candidates.push_back({source, d});
        std::sort(candidates.begin(), candidates.end(),
                  [](const NeighborEntry& a, const NeighborEntry& b) {
                      return canonical_less(Key{a.distance, a.source},
                                            Key{b.distance, b.source});
                  });
        if (candidates.size() > k) candidates.resize(k);
        table.rows[v] = candidates;
    }
    return table;
}

}  // namespace graphknn
