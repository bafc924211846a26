#include "fast_knn.hpp"

#include <algorithm>
#include <stdexcept>

namespace graphknn {

// ---- LocalQueueHashed ---------------------------------------------------

void LocalQueueHashed::sift_up(std::size_t i) {
    while (i > 0) {
        std::size_t parent = (i - 1) / 2;
        if (!canonical_less(heap_[i], heap_[parent])) break;
        std::swap(heap_[i], heap_[parent]);
        slot_[heap_[i].source] = static_cast<std::uint32_t>(i);
        slot_[heap_[parent].source] = static_cast<std::uint32_t>(parent);
        i = parent;
    }
}

void LocalQueueHashed::sift_down(std::size_t i) {
    for (;;) {
        std::size_t smallest = i;
        std::size_t left = 2 * i + 1, right = 2 * i + 2;
        if (left < heap_.size() && canonical_less(heap_[left], heap_[smallest])) smallest = left;
        if (right < heap_.size() && canonical_less(heap_[right], heap_[smallest])) smallest = right;
        if (smallest == i) break;
        std::swap(heap_[i], heap_[smallest]);
        slot_[heap_[i].source] = static_cast<std::uint32_t>(i);
        slot_[heap_[smallest].source] = static_cast<std::uint32_t>(smallest);
        i = smallest;
    }
}

LocalQueueHashed::Offer LocalQueueHashed::offer(Vertex source, Weight dist, std::uint32_t) {
    if (disabled_) return Offer::discarded;
    if (settled_.contains(source)) return Offer::discarded;
    auto it = slot_.find(source);
    if (it != slot_.end()) {
        Key candidate{dist, source};
        if (!canonical_less(candidate, heap_[it->second])) return Offer::discarded;
        heap_[it->second] = candidate;
        sift_up(it->second);
        return Offer::decreased;
    }
    heap_.push_back(Key{dist, source});
    slot_.emplace(source, static_cast<std::uint32_t>(heap_.size() - 1));
    sift_up(heap_.size() - 1);
    return Offer::inserted;
}

Key LocalQueueHashed::pop_min() {
    Key top = heap_.front();
    slot_.erase(top.source);
    heap_.front() = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        slot_[heap_.front().source] = 0;
        sift_down(0);
    }
    GKNN_CHECK(settled_.insert(top.source).second, "source settled twice at one vertex");
    return top;
}

void LocalQueueHashed::disable() {
    disabled_ = true;
    std::vector<Key>().swap(heap_);
    std::unordered_map<Vertex, std::uint32_t>().swap(slot_);
    std::unordered_set<Vertex>().swap(settled_);
}

// ---- LocalQueueBounded --------------------------------------------------

LocalQueueBounded::Offer LocalQueueBounded::offer(Vertex source, Weight dist, std::uint32_t k) {
    if (disabled_) return Offer::discarded;
    auto it = by_source_.find(source);
    if (it != by_source_.end()) {
        if (it->second.settled) return Offer::discarded;
        if (!(dist < it->second.dist)) return Offer::discarded;
        pending_.erase({it->second.dist, source});
        pending_.insert({dist, source});
        it->second.dist = dist;
        return Offer::decreased;
    }
    if (by_source_.size() >= k) {
        // Full: settled keys all precede pending keys, so the k-th smallest
        // retained key is the largest pending one.
        auto largest = std::prev(pending_.end());
        Key incoming{dist, source};
        Key bound{largest->first, largest->second};
        if (!canonical_less(incoming, bound)) return Offer::discarded;
        by_source_.erase(largest->second);
        pending_.erase(largest);
    }
    by_source_.emplace(source, Info{dist, false});
    pending_.insert({dist, source});
    return Offer::inserted;
}

Key LocalQueueBounded::pop_min() {
    auto it = pending_.begin();
    Key top{it->first, it->second};
    auto info = by_source_.find(top.source);
    GKNN_CHECK(info != by_source_.end() && !info->second.settled,
               "source settled twice at one vertex");
    info->second.settled = true;
    pending_.erase(it);
    return top;
}

void LocalQueueBounded::disable() {
    disabled_ = true;
    by_source_.clear();
    pending_.clear();
}

// ---- GlobalQueue --------------------------------------------------------

void GlobalQueue::sift_up(std::size_t i) {
    while (i > 0) {
        std::size_t parent = (i - 1) / 2;
        if (!entry_less(heap_[i], heap_[parent])) break;
        std::swap(heap_[i], heap_[parent]);
        pos_[heap_[i].vertex] = static_cast<std::uint32_t>(i);
        pos_[heap_[parent].vertex] = static_cast<std::uint32_t>(parent);
        i = parent;
    }
}

void GlobalQueue::sift_down(std::size_t i) {
    for (;;) {
        std::size_t smallest = i;
        std::size_t left = 2 * i + 1, right = 2 * i + 2;
        if (left < heap_.size() && entry_less(heap_[left], heap_[smallest])) smallest = left;
        if (right < heap_.size() && entry_less(heap_[right], heap_[smallest])) smallest = right;
        if (smallest == i) break;
        std::swap(heap_[i], heap_[smallest]);
        pos_[heap_[i].vertex] = static_cast<std::uint32_t>(i);
        pos_[heap_[smallest].vertex] = static_cast<std::uint32_t>(smallest);
        i = smallest;
    }
}

void GlobalQueue::push(Vertex v, Key key) {
    GKNN_CHECK(pos_[v] == npos, "vertex already queued globally");
    heap_.push_back(Entry{key, v});
    pos_[v] = static_cast<std::uint32_t>(heap_.size() - 1);
    sift_up(heap_.size() - 1);
}

void GlobalQueue::decrease(Vertex v, Key key) {
    std::uint32_t i = pos_[v];
    GKNN_CHECK(i != npos, "decrease on unqueued vertex");
    GKNN_CHECK(canonical_less(key, heap_[i].key), "global key may only decrease");
    heap_[i].key = key;
    sift_up(i);
}

std::pair<Vertex, Key> GlobalQueue::pop_min() {
    Entry top = heap_.front();
    pos_[top.vertex] = npos;
    heap_.front() = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        pos_[heap_.front().vertex] = 0;
        sift_down(0);
    }
    return {top.vertex, top.key};
}

// ---- KnnEngine ----------------------------------------------------------

template <class LocalQueue>
KnnEngine<LocalQueue>::KnnEngine(const Graph& g, std::uint32_t k,
                                 std::span<const Vertex> seeds, bool record_trace)
    : graph_(g),
      k_(k),
      global_(g.vertex_count()),
      local_(g.vertex_count()),
      rows_(g.vertex_count()),
      record_trace_(record_trace) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (seeds.empty()) throw std::invalid_argument("seed set must be non-empty");
    for (Vertex s : seeds) {
        if (s >= g.vertex_count()) throw std::invalid_argument("seed out of range");
        // Each seed starts its own Dijkstra with the event (s, s, 0).
        auto result = local_[s].offer(s, 0.0, k_);
        if (result == LocalQueue::Offer::inserted) {
            ++stats_.events_inserted;
            global_.push(s, Key{0.0, s});
        }
    }
}

template <class LocalQueue>
void KnnEngine<LocalQueue>::relax(Vertex from, Vertex source, Weight dist) {
    for (const EdgeTo& e : graph_.out(from)) {
        ++stats_.relax_ops;
        Vertex z = e.to;
        Weight candidate = dist + e.weight;
        auto result = local_[z].offer(source, candidate, k_);
        if (result == LocalQueue::Offer::discarded) continue;
        if (result == LocalQueue::Offer::inserted)
            ++stats_.events_inserted;
        else
            ++stats_.decrease_keys;
        Key new_min = *local_[z].min();
        if (!global_.contains(z)) {
            global_.push(z, new_min);
        } else if (canonical_less(new_min, global_.key_of(z))) {
            global_.decrease(z, new_min);
        }
    }
}

template <class LocalQueue>
std::optional<Event> KnnEngine<LocalQueue>::step() {
    if (global_.empty()) {
        finished_ = true;
        return std::nullopt;
    }
    auto [v, key] = global_.pop_min();
    ++stats_.global_extracts;
    Key settled = local_[v].pop_min();
    ++stats_.local_extracts;
    GKNN_CHECK(settled == key, "global key out of sync with local minimum");
    GKNN_CHECK(!any_settled_ || !canonical_less(settled, last_settled_),
               "settle keys must be non-decreasing");
    last_settled_ = settled;
    any_settled_ = true;

    rows_[v].push_back({settled.source, settled.dist});
    if (rows_[v].size() >= k_) {
        // c_v reached k: this queue takes no further part in the run. The
        // vertex is already off the global queue from the extract-min.
        local_[v].disable();
    } else if (auto remaining = local_[v].min()) {
        // Re-publication after an extract is always a fresh insert.
        global_.push(v, *remaining);
    }

    Event event{v, settled.source, settled.dist};
    if (record_trace_) trace_.push_back(event);
    relax(v, settled.source, settled.dist);
    return event;
}

template <class LocalQueue>
KnnTable KnnEngine<LocalQueue>::take_table() {
    GKNN_CHECK(finished_, "table requested before the run finished");
    KnnTable table;
    table.k = k_;
    table.rows = std::move(rows_);
    return table;
}

template class KnnEngine<LocalQueueHashed>;
template class KnnEngine<LocalQueueBounded>;

namespace {

template <class LocalQueue>
KnnTable run_to_table(const Graph& g, std::uint32_t k, std::span<const Vertex> seeds,
                      RunStats* stats) {
    KnnEngine<LocalQueue> engine(g, k, seeds);
    engine.run();
    if (stats) *stats = engine.stats();
    return engine.take_table();
}

KnnTable run_seeded(const Graph& g, std::uint32_t k, std::span<const Vertex> seeds,
                    MembershipMode mode, RunStats* stats) {
    if (mode == MembershipMode::bounded)
        return run_to_table<LocalQueueBounded>(g, k, seeds, stats);
    return run_to_table<LocalQueueHashed>(g, k, seeds, stats);
}

}  // namespace

KnnTable knn_all(const Graph& g, std::uint32_t k, MembershipMode mode, RunStats* stats) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (stats) *stats = RunStats{};
    if (g.vertex_count() == 0) return KnnTable{k, {}};
    std::vector<Vertex> seeds(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) seeds[v] = v;
    return run_seeded(g, k, seeds, mode, stats);
}

KnnTable knn_from_terminals(const Graph& g, std::uint32_t k,
                            std::span<const Vertex> terminals, MembershipMode mode,
                            RunStats* stats) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (terminals.empty()) throw std::invalid_argument("terminal set must be non-empty");
    if (stats) *stats = RunStats{};
    std::vector<Vertex> seeds(terminals.begin(), terminals.end());
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    return run_seeded(g, k, seeds, mode, stats);
}

}  // namespace graphknn
