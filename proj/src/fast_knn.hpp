#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graph.hpp"
#include "knn_types.hpp"

namespace graphknn {

// n conceptually simultaneous Dijkstra runs over one two-level queue
// structure. Each vertex u owns a local addressable min-queue of pending
// events, at most one per source; a global addressable min-queue over
// vertices tracks each local minimum. A settle pops the global minimum's
// local minimum and fixes that (source, distance) pair for the target;
// after k settles a vertex's queue is disabled and stops taking updates.
// All keys are (distance, source) pairs under canonical_less, with vertex
// id as the global queue's final tie-break, so runs are deterministic.

enum class MembershipMode { hashed, bounded };

// Settled-source membership via hashing; pending events in an addressable
// binary heap with a source -> slot map.
class LocalQueueHashed {
public:
    enum class Offer { discarded, inserted, decreased };

    Offer offer(Vertex source, Weight dist, std::uint32_t k);
    std::optional<Key> min() const {
        if (disabled_ || heap_.empty()) return std::nullopt;
        return heap_.front();
    }
    Key pop_min();
    void disable();
    bool disabled() const { return disabled_; }

private:
    void sift_up(std::size_t i);
    void sift_down(std::size_t i);

    std::vector<Key> heap_;
    std::unordered_map<Vertex, std::uint32_t> slot_;  // source -> heap index
    std::unordered_set<Vertex> settled_;
    bool disabled_ = false;
};

// Deterministic variant: ordered containers only, retaining at most the k
// smallest candidates (settled and pending together). A candidate no
// smaller than the k-th retained key is rejected outright; an insert into
// a full structure evicts the largest retained pending candidate.
class LocalQueueBounded {
public:
    enum class Offer { discarded, inserted, decreased };

    Offer offer(Vertex source, Weight dist, std::uint32_t k);
    std::optional<Key> min() const {
        if (disabled_ || pending_.empty()) return std::nullopt;
        auto it = pending_.begin();
        return Key{it->first, it->second};
    }
    Key pop_min();
    void disable();
    bool disabled() const { return disabled_; }

private:
    struct Info {
        Weight dist;
        bool settled;
    };
    // Settled and retained-pending candidates by source; pending ones also
    // by key for min/eviction. Together they hold at most k sources.
    std::map<Vertex, Info> by_source_;
    std::set<std::pair<Weight, Vertex>> pending_;
    bool disabled_ = false;
};

// Indexed binary min-heap over vertex ids, keyed by each vertex's local
// minimum; ties beyond (distance, source) break by vertex id. Keys only
// ever decrease while a vertex is queued.
class GlobalQueue {
public:
    explicit GlobalQueue(Vertex n) : pos_(n, npos) {}

    bool empty() const { return heap_.empty(); }
    bool contains(Vertex v) const { return pos_[v] != npos; }
    Key key_of(Vertex v) const { return heap_[pos_[v]].key; }
    void push(Vertex v, Key key);
    void decrease(Vertex v, Key key);
    std::pair<Vertex, Key> pop_min();

private:
    struct Entry {
        Key key;
        Vertex vertex;
    };
    static bool entry_less(const Entry& a, const Entry& b) {
        if (!(a.key == b.key)) return canonical_less(a.key, b.key);
        return a.vertex < b.vertex;
    }
    void sift_up(std::size_t i);
    void sift_down(std::size_t i);

    static constexpr std::uint32_t npos = 0xffffffffu;
    std::vector<Entry> heap_;
    std::vector<std::uint32_t> pos_;  // vertex -> heap index
};

// One run of the simultaneous Dijkstra. Construction performs the seed
// initialization; step() settles one event at a time, which is what the
// step-level tests drive. knn_all / knn_from_terminals below are the
// run-to-completion wrappers.
template <class LocalQueue>
class KnnEngine {
public:
    KnnEngine(const Graph& g, std::uint32_t k, std::span<const Vertex> seeds,
              bool record_trace = false);

    // Settles and returns the next event, or nullopt when exhausted.
    std::optional<Event> step();

    void run() {
        while (step()) {
        }
    }
    bool done() const { return finished_; }

    const RunStats& stats() const { return stats_; }
    const std::vector<Event>& trace() const { return trace_; }

    // Valid once step() has returned nullopt. Rows are in settle order,
    // which per row is ascending canonical order.
    KnnTable take_table();

private:
    void relax(Vertex from, Vertex source, Weight dist);

    const Graph& graph_;
    std::uint32_t k_;
    GlobalQueue global_;
    std::vector<LocalQueue> local_;
    std::vector<std::vector<NeighborEntry>> rows_;
    RunStats stats_;
    std::vector<Event> trace_;
    Key last_settled_{0.0, 0};
    bool any_settled_ = false;
    bool finished_ = false;
    bool record_trace_ = false;
};

extern template class KnnEngine<LocalQueueHashed>;
extern template class KnnEngine<LocalQueueBounded>;

// Exact table of the min(k, reachable-source count) nearest sources per
// vertex. Both modes return bit-identical tables. stats may be null.
KnnTable knn_all(const Graph& g, std::uint32_t k,
                 MembershipMode mode = MembershipMode::hashed,
                 RunStats* stats = nullptr);

// Restricts sources to `terminals` (non-empty, deduplicated internally).
KnnTable knn_from_terminals(const Graph& g, std::uint32_t k,
                            std::span<const Vertex> terminals,
                            MembershipMode mode = MembershipMode::hashed,
                            RunStats* stats = nullptr);

}  // namespace graphknn
