#include <doctest.h>

#include <graphknn.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

namespace {

struct GraphDeleter {
    void operator()(gknn_graph* g) const { gknn_graph_free(g); }
};
struct TableDeleter {
    void operator()(gknn_table* t) const { gknn_table_free(t); }
};
using GraphPtr = std::unique_ptr<gknn_graph, GraphDeleter>;
using TablePtr = std::unique_ptr<gknn_table, TableDeleter>;

GraphPtr parse(const std::string& text,
               gknn_format format = GKNN_FORMAT_AUTO) {
    gknn_graph* g = nullptr;
    REQUIRE(gknn_graph_parse(text.data(), text.size(), format, &g) == GKNN_OK);
    return GraphPtr(g);
}

TablePtr knn(const gknn_graph* g, uint32_t k, gknn_run_stats* stats = nullptr) {
    gknn_table* t = nullptr;
    REQUIRE(gknn_knn_all(g, k, GKNN_MODE_HASHED, &t, stats) == GKNN_OK);
    return TablePtr(t);
}

const char kPathText[] = "3 2\n0 1 1\n1 2 1\n";

}  // namespace

TEST_CASE("capi: version and error strings are always present") {
    CHECK(gknn_version() != nullptr);
    CHECK(gknn_last_error() != nullptr);
}

TEST_CASE("capi: format detection") {
    const char dimacs[] = "c x\np sp 2 1\na 1 2 5\n";
    CHECK(gknn_format_detect(dimacs, sizeof dimacs - 1) == GKNN_FORMAT_DIMACS);
    CHECK(gknn_format_detect(kPathText, sizeof kPathText - 1) ==
          GKNN_FORMAT_EDGELIST);
}

TEST_CASE("capi: parse, counts, and parse failures") {
    GraphPtr g = parse(kPathText);
    CHECK(gknn_graph_vertex_count(g.get()) == 3);
    CHECK(gknn_graph_edge_count(g.get()) == 2);

    gknn_graph* bad = nullptr;
    gknn_status s = gknn_graph_parse("2 1\n0 1 0\n", 10, GKNN_FORMAT_EDGELIST, &bad);
    CHECK(s == GKNN_ERR_PARSE);
    CHECK(std::strstr(gknn_last_error(), "line 2") != nullptr);

    CHECK(gknn_graph_parse(nullptr, 0, GKNN_FORMAT_AUTO, &bad) ==
          GKNN_ERR_INVALID_ARG);
    const char text[] = "1 0\n";
    CHECK(gknn_graph_parse(text, sizeof text - 1, GKNN_FORMAT_AUTO, nullptr) ==
          GKNN_ERR_INVALID_ARG);
}

TEST_CASE("capi: load reads files and reports IO failures") {
    auto path = std::filesystem::temp_directory_path() / "gknn_capi_graph.txt";
    {
        std::ofstream out(path);
        out << kPathText;
    }
    gknn_graph* g = nullptr;
    REQUIRE(gknn_graph_load(path.string().c_str(), GKNN_FORMAT_AUTO, &g) == GKNN_OK);
    GraphPtr owner(g);
    CHECK(gknn_graph_vertex_count(g) == 3);
    std::filesystem::remove(path);

    gknn_graph* missing = nullptr;
    CHECK(gknn_graph_load("/nonexistent/gknn.txt", GKNN_FORMAT_AUTO, &missing) ==
          GKNN_ERR_IO);
    CHECK(gknn_last_error()[0] != '\0');
}

TEST_CASE("capi: from_edges validation") {
    const uint32_t src[] = {0, 1};
    const uint32_t dst[] = {1, 2};
    const double w[] = {1.0, 2.0};
    gknn_graph* g = nullptr;
    REQUIRE(gknn_graph_from_edges(3, 2, src, dst, w, &g) == GKNN_OK);
    GraphPtr owner(g);
    CHECK(gknn_graph_edge_count(g) == 2);

    const double bad_w[] = {0.0, 2.0};
    gknn_graph* bad = nullptr;
    CHECK(gknn_graph_from_edges(3, 2, src, dst, bad_w, &bad) ==
          GKNN_ERR_INVALID_ARG);
    CHECK(gknn_graph_from_edges(3, 2, nullptr, dst, w, &bad) ==
          GKNN_ERR_INVALID_ARG);
    CHECK(gknn_graph_from_edges(0, 0, nullptr, nullptr, nullptr, &g) == GKNN_OK);
    gknn_graph_free(g);
}

TEST_CASE("capi: knn_all on the path graph with stats") {
    GraphPtr g = parse(kPathText);
    gknn_run_stats stats{};
    TablePtr t = knn(g.get(), 2, &stats);

    CHECK(gknn_table_k(t.get()) == 2);
    CHECK(gknn_table_vertex_count(t.get()) == 3);
    CHECK(gknn_table_row_size(t.get(), 0) == 1);
    CHECK(gknn_table_row_size(t.get(), 2) == 2);
    CHECK(gknn_table_row_size(t.get(), 9) == 0);  // out of range: empty

    uint32_t source = 0;
    double dist = -1.0;
    REQUIRE(gknn_table_entry(t.get(), 2, 1, &source, &dist) == GKNN_OK);
    CHECK(source == 1);
    CHECK(dist == 1.0);
    CHECK(gknn_table_entry(t.get(), 2, 2, &source, &dist) == GKNN_ERR_INVALID_ARG);
    CHECK(gknn_table_entry(t.get(), 5, 0, &source, &dist) == GKNN_ERR_INVALID_ARG);

    CHECK(stats.relax_ops == 3);
    CHECK(stats.local_extracts == stats.global_extracts);
    CHECK(stats.events_inserted == 6);

    gknn_table* bad = nullptr;
    CHECK(gknn_knn_all(g.get(), 0, GKNN_MODE_HASHED, &bad, nullptr) ==
          GKNN_ERR_INVALID_ARG);
    CHECK(gknn_knn_all(nullptr, 1, GKNN_MODE_HASHED, &bad, nullptr) ==
          GKNN_ERR_INVALID_ARG);
}

TEST_CASE("capi: modes, oracle, and randomized all agree") {
    gknn_graph* raw = nullptr;
    REQUIRE(gknn_graph_random(60, 240, 1, 3, 99, &raw) == GKNN_OK);
    GraphPtr g(raw);

    gknn_table* hashed_raw = nullptr;
    gknn_table* bounded_raw = nullptr;
    gknn_table* oracle_raw = nullptr;
    gknn_table* mc_raw = nullptr;
    REQUIRE(gknn_knn_all(g.get(), 4, GKNN_MODE_HASHED, &hashed_raw, nullptr) ==
            GKNN_OK);
    REQUIRE(gknn_knn_all(g.get(), 4, GKNN_MODE_BOUNDED, &bounded_raw, nullptr) ==
            GKNN_OK);
    REQUIRE(gknn_knn_brute_force(g.get(), 4, nullptr, 0, 2, &oracle_raw) == GKNN_OK);
    REQUIRE(gknn_knn_randomized(g.get(), 4, 4, 17, 2, &mc_raw) == GKNN_OK);
    TablePtr hashed(hashed_raw), bounded(bounded_raw), oracle(oracle_raw), mc(mc_raw);

    CHECK(gknn_table_equal(hashed.get(), bounded.get()) == 1);
    CHECK(gknn_table_equal(hashed.get(), oracle.get()) == 1);
    CHECK(gknn_table_equal(hashed.get(), mc.get()) == 1);
}

TEST_CASE("capi: random graph generation is seed-deterministic") {
    gknn_graph *a = nullptr, *b = nullptr, *c = nullptr;
    REQUIRE(gknn_graph_random(40, 160, 1, 100, 7, &a) == GKNN_OK);
    REQUIRE(gknn_graph_random(40, 160, 1, 100, 7, &b) == GKNN_OK);
    REQUIRE(gknn_graph_random(40, 160, 1, 100, 8, &c) == GKNN_OK);
    GraphPtr ga(a), gb(b), gc(c);
    TablePtr ta = knn(a, 3), tb = knn(b, 3), tc = knn(c, 3);
    CHECK(gknn_table_equal(ta.get(), tb.get()) == 1);
    CHECK(gknn_table_equal(ta.get(), tc.get()) == 0);

    gknn_graph* bad = nullptr;
    CHECK(gknn_graph_random(3, 100, 1, 5, 1, &bad) == GKNN_ERR_INVALID_ARG);
}

TEST_CASE("capi: reverse flips who reaches whom") {
    GraphPtr g = parse(kPathText);
    gknn_graph* raw = nullptr;
    REQUIRE(gknn_graph_reverse(g.get(), &raw) == GKNN_OK);
    GraphPtr rev(raw);
    TablePtr t = knn(rev.get(), 3);
    // On the reversed path 2->1->0, vertex 0 hears from everyone.
    CHECK(gknn_table_row_size(t.get(), 0) == 3);
    CHECK(gknn_table_row_size(t.get(), 2) == 1);
}

TEST_CASE("capi: terminal variant") {
    GraphPtr g = parse(kPathText);
    const uint32_t terms[] = {0};
    gknn_table* raw = nullptr;
    REQUIRE(gknn_knn_terminals(g.get(), 2, terms, 1, GKNN_MODE_HASHED, &raw,
                               nullptr) == GKNN_OK);
    TablePtr t(raw);
    uint32_t source = 9;
    double dist = -1.0;
    REQUIRE(gknn_table_entry(t.get(), 2, 0, &source, &dist) == GKNN_OK);
    CHECK(source == 0);
    CHECK(dist == 2.0);

    gknn_table* bad = nullptr;
    CHECK(gknn_knn_terminals(g.get(), 2, nullptr, 0, GKNN_MODE_HASHED, &bad,
                             nullptr) == GKNN_ERR_INVALID_ARG);
    const uint32_t oob[] = {5};
    CHECK(gknn_knn_terminals(g.get(), 2, oob, 1, GKNN_MODE_HASHED, &bad, nullptr) ==
          GKNN_ERR_INVALID_ARG);
}

TEST_CASE("capi: round_count spot values") {
    CHECK(gknn_round_count(100, 1, 3) == 139);
    CHECK(gknn_round_count(2, 1, 3) == 21);
    CHECK(gknn_round_count(1, 1, 3) == 0);  // invalid input reports via last_error
    CHECK(gknn_last_error()[0] != '\0');
}

TEST_CASE("capi: table rendering round-trips through the C boundary") {
    GraphPtr g = parse(kPathText);
    TablePtr t = knn(g.get(), 2);
    char* text = nullptr;
    REQUIRE(gknn_table_to_string(t.get(), &text) == GKNN_OK);
    CHECK(std::string(text) ==
          "0\t0\t0\t0\n"
          "1\t0\t1\t0\n"
          "1\t1\t0\t1\n"
          "2\t0\t2\t0\n"
          "2\t1\t1\t1\n");
    gknn_string_free(text);
}

TEST_CASE("capi: null-tolerant accessors") {
    CHECK(gknn_graph_vertex_count(nullptr) == 0);
    CHECK(gknn_graph_edge_count(nullptr) == 0);
    CHECK(gknn_table_k(nullptr) == 0);
    CHECK(gknn_table_vertex_count(nullptr) == 0);
    CHECK(gknn_table_row_size(nullptr, 0) == 0);
    CHECK(gknn_table_equal(nullptr, nullptr) == 1);
    gknn_graph_free(nullptr);
    gknn_table_free(nullptr);
    gknn_string_free(nullptr);
}
