#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphknn {

using Vertex = std::uint32_t;
using Weight = double;

// (distance, source) pair ordered lexicographically. This canonical order
// replaces any assumption that shortest-path distances are distinct: every
// queue and every output row uses it, so all algorithms produce the same
// table bit for bit.
struct Key {
    Weight dist;
    Vertex source;
};

constexpr bool canonical_less(const Key& a, const Key& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return a.source < b.source;
}

constexpr bool operator==(const Key& a, const Key& b) {
    return a.dist == b.dist && a.source == b.source;
}

// One unit of work in the simultaneous Dijkstra: source s proposes
// distance d to target v.
struct Event {
    Vertex target;
    Vertex source;
    Weight dist;
};

constexpr bool operator==(const Event& a, const Event& b) {
    return a.target == b.target && a.source == b.source && a.dist == b.dist;
}

struct NeighborEntry {
    Vertex source;
    Weight distance;
};

constexpr bool operator==(const NeighborEntry& a, const NeighborEntry& b) {
    return a.source == b.source && a.distance == b.distance;
}

// Output of every algorithm: rows[v] holds the nearest sources of v in
// ascending (distance, source) order, at most k of them, fewer when fewer
// sources reach v.
struct KnnTable {
    std::uint32_t k = 0;
    std::vector<std::vector<NeighborEntry>> rows;

    // Equality is row content only; two tables computed with different k
    // requests but identical rows compare equal.
    friend bool operator==(const KnnTable& a, const KnnTable& b) {
        return a.rows == b.rows;
    }
};

// Counters populated by the fast algorithm; they only ever increase during
// a run.
struct RunStats {
    std::uint64_t relax_ops = 0;
    std::uint64_t global_extracts = 0;
    std::uint64_t local_extracts = 0;
    std::uint64_t events_inserted = 0;
    std::uint64_t decrease_keys = 0;
};

namespace detail {
[[noreturn]] inline void check_failed(const char* what, const char* file, int line) {
    throw std::logic_error(std::string("internal invariant violated: ") + what +
                           " (" + file + ":" + std::to_string(line) + ")");
}
}  // namespace detail

// Always-on invariant check for the engine's structural guarantees (settle
// monotonicity, no stale settles, queue agreement). Cheap enough to keep in
// release builds.
#define GKNN_CHECK(cond, what)                                         \
    do {                                                               \
        if (!(cond)) ::graphknn::detail::check_failed(what, __FILE__, __LINE__); \
    } while (0)

}  // namespace graphknn
