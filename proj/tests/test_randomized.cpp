#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "fast_knn.hpp"
#include "oracle.hpp"
#include "randomized_knn.hpp"
#include "test_support.hpp"

using namespace graphknn;
using testsupport::mk_graph;

TEST_CASE("round_count: spot values and linearity") {
    CHECK(round_count(100, 1, 3) == 139);  // ceil(30 ln 100)
    CHECK(round_count(2, 1, 3) == 21);     // ceil(30 ln 2)

    // t is ceil(A k): doubling k at most loses one unit to rounding.
    for (std::uint32_t k : {1u, 2u, 4u, 8u, 16u}) {
        std::int64_t t1 = static_cast<std::int64_t>(round_count(50, k, 3));
        std::int64_t t2 = static_cast<std::int64_t>(round_count(50, 2 * k, 3));
        CHECK(std::abs(t2 - 2 * t1) <= 1);
    }

    CHECK_THROWS_AS((void)round_count(1, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS((void)round_count(10, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS((void)round_count(10, 1, 2), std::invalid_argument);
}

TEST_CASE("in_sample: pure in (seed, round, vertex) and roughly 1/k dense") {
    for (int rep = 0; rep < 3; ++rep)
        CHECK(in_sample(9, 4, 17, 5) == in_sample(9, 4, 17, 5));

    // k=1 means every vertex is in every sample.
    for (Vertex v = 0; v < 50; ++v) CHECK(in_sample(123, 7, v, 1));

    // Density over many draws should be near 1/k; the band is generous
    // (±40% relative) because this is a smoke check, not a statistics test.
    const std::uint32_t k = 8;
    int hits = 0;
    const int draws = 20000;
    for (int round = 0; round < draws / 100; ++round)
        for (Vertex v = 0; v < 100; ++v)
            if (in_sample(42, round, v, k)) ++hits;
    double rate = static_cast<double>(hits) / draws;
    CHECK(rate > 0.6 / k);
    CHECK(rate < 1.4 / k);

    // Different seeds give different samples somewhere.
    bool differs = false;
    for (Vertex v = 0; v < 64 && !differs; ++v)
        differs = in_sample(1, 0, v, 4) != in_sample(2, 0, v, 4);
    CHECK(differs);
}

TEST_CASE("multi_source_dijkstra: listed examples") {
    Graph path = mk_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});

    std::vector<Vertex> both = {0, 2};
    auto got = multi_source_dijkstra(path, both);
    REQUIRE(got.size() == 3);
    REQUIRE(got[1].has_value());
    CHECK(got[1]->source == 0);
    CHECK(got[1]->dist == 1.0);
    REQUIRE(got[2].has_value());
    CHECK(got[2]->source == 2);
    CHECK(got[2]->dist == 0.0);

    auto none = multi_source_dijkstra(path, {});
    for (const auto& e : none) CHECK_FALSE(e.has_value());

    // Sink vertex as the only source: nothing else is reachable.
    std::vector<Vertex> sink = {2};
    auto from_sink = multi_source_dijkstra(path, sink);
    CHECK_FALSE(from_sink[0].has_value());
    CHECK_FALSE(from_sink[1].has_value());
    CHECK(from_sink[2]->source == 2);
}

TEST_CASE("multi_source_dijkstra: singleton agrees with truncated_dijkstra") {
    Graph g = random_graph(40, 200, 1, 9, 2718);
    for (Vertex s : {0u, 7u, 39u}) {
        std::vector<Vertex> one = {s};
        auto multi = multi_source_dijkstra(g, one);
        auto single = truncated_dijkstra(g, s, g.vertex_count());
        std::vector<std::optional<Weight>> dist(g.vertex_count());
        for (auto [v, d] : single) dist[v] = d;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            CHECK(multi[v].has_value() == dist[v].has_value());
            if (multi[v]) {
                CHECK(multi[v]->source == s);
                CHECK(multi[v]->dist == *dist[v]);
            }
        }
    }
}

TEST_CASE("multi_source_dijkstra: equal distances pick the smaller source") {
    // 0 and 2 both reach 1 at distance 1.
    Graph g = mk_graph(3, {{0, 1, 1.0}, {2, 1, 1.0}});
    std::vector<Vertex> sources = {2, 0};  // order must not matter
    auto got = multi_source_dijkstra(g, sources);
    CHECK(got[1]->source == 0);
    CHECK(got[1]->dist == 1.0);

    std::vector<Vertex> dup = {0, 0, 2};  // duplicates are harmless
    auto got2 = multi_source_dijkstra(g, dup);
    CHECK(got2[1]->source == 0);
}

TEST_CASE("randomized_knn: trivial graphs") {
    KnnTable empty = randomized_knn(mk_graph(0, {}), 2, 4, 1);
    CHECK(empty.rows.empty());

    KnnTable one = randomized_knn(mk_graph(1, {}), 3, 4, 99);
    REQUIRE(one.rows.size() == 1);
    CHECK(one.rows[0] == std::vector<NeighborEntry>{{0, 0.0}});

    CHECK_THROWS_AS((void)randomized_knn(mk_graph(2, {}), 0, 4, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)randomized_knn(mk_graph(2, {}), 1, 2, 1),
                    std::invalid_argument);
}

TEST_CASE("randomized_knn: fixed seeds reproduce and match knn_all at c=4") {
    Graph path = mk_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    KnnTable want = knn_all(path, 2);
    for (std::uint64_t seed : {0, 1, 7, 41}) {
        KnnTable got = randomized_knn(path, 2, 4, seed);
        CHECK(got == want);
        CHECK(randomized_knn(path, 2, 4, seed) == got);  // reproducible
    }

    Graph g = random_graph(60, 240, 1, 3, 808);
    KnnTable want_g = knn_all(g, 3);
    for (std::uint64_t seed : {5, 6}) CHECK(randomized_knn(g, 3, 4, seed) == want_g);
}

TEST_CASE("randomized_knn: thread count cannot change the output") {
    Graph g = random_graph(50, 200, 1, 5, 904);
    KnnTable serial = randomized_knn(g, 2, 3, 77, 1);
    for (unsigned threads : {2u, 3u, 8u})
        CHECK(randomized_knn(g, 2, 3, 77, threads) == serial);
}

TEST_CASE("randomized_knn: emitted entries are always sound") {
    // Rows may in principle omit entries (Monte Carlo), but every entry that
    // is present must carry the exact shortest-path distance and rows must
    // stay canonically ordered. The k=n table lists every (source, distance)
    // ground-truth pair.
    Graph g = random_graph(80, 320, 1, 2, 1212);
    KnnTable full = knn_all(g, 80);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        KnnTable got = randomized_knn(g, 4, 3, seed);
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            const auto& row = got.rows[v];
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i > 0)
                    CHECK(canonical_less(Key{row[i - 1].distance, row[i - 1].source},
                                         Key{row[i].distance, row[i].source}));
                auto it = std::find_if(full.rows[v].begin(), full.rows[v].end(),
                                       [&](const NeighborEntry& t) {
                                           return t.source == row[i].source;
                                       });
                REQUIRE(it != full.rows[v].end());
                CHECK(it->distance == row[i].distance);
            }
        }
    }
}

TEST_CASE("randomized_knn: k=n mismatch frequency stays within the bound") {
    // With k = n and c = 3 the per-run failure bound is 1/n; over 50 seeds
    // on n = 30 the expected mismatches are <= 50/30 ~ 1.7. Seeing more than
    // 13 would be astronomically unlikely under a correct implementation
    // (Chernoff: P[X > 13] < 10^-9 at mean 1.7).
    Graph g = random_graph(30, 120, 1, 3, 3030);
    KnnTable truth = knn_all(g, 30);
    int mismatches = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed)
        if (randomized_knn(g, 30, 3, seed) != truth) ++mismatches;
    CHECK(mismatches <= 13);
}
