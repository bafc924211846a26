#include "../include/graphknn.h"

#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fast_knn.hpp"
#include "graph.hpp"
#include "knn_types.hpp"
#include "oracle.hpp"
#include "randomized_knn.hpp"
#include "table_io.hpp"

struct gknn_graph {
    graphknn::Graph impl;
};

struct gknn_table {
    graphknn::KnnTable impl;
};

namespace {

thread_local std::string g_last_error;

// File problems have no C++ exception type of their own here; tag them so the
// dispatcher below can map them to GKNN_ERR_IO.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

gknn_status fail(gknn_status status, const char* message) {
    g_last_error = message;
    return status;
}

// Runs `fn`, translating exceptions into status codes + last-error text.
template <class Fn>
gknn_status guarded(Fn&& fn) {
    try {
        fn();
        return GKNN_OK;
    } catch (const graphknn::ParseError& e) {
        return fail(GKNN_ERR_PARSE, e.what());
    } catch (const IoError& e) {
        return fail(GKNN_ERR_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(GKNN_ERR_INVALID_ARG, e.what());
    } catch (const std::bad_alloc&) {
        return fail(GKNN_ERR_NOMEM, "out of memory");
    } catch (const std::exception& e) {
        return fail(GKNN_ERR_INTERNAL, e.what());
    }
}

graphknn::Format require_format(std::string_view text, gknn_format format) {
    switch (format) {
        case GKNN_FORMAT_AUTO:
            return graphknn::detect_format(text);
        case GKNN_FORMAT_EDGELIST:
            return graphknn::Format::edgelist;
        case GKNN_FORMAT_DIMACS:
            return graphknn::Format::dimacs;
    }
    throw std::invalid_argument("unknown gknn_format value");
}

graphknn::MembershipMode require_mode(gknn_mode mode) {
    switch (mode) {
        case GKNN_MODE_HASHED:
            return graphknn::MembershipMode::hashed;
        case GKNN_MODE_BOUNDED:
            return graphknn::MembershipMode::bounded;
    }
    throw std::invalid_argument("unknown gknn_mode value");
}

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

void export_stats(const graphknn::RunStats& in, gknn_run_stats* out) {
    if (!out) return;
    out->relax_ops = in.relax_ops;
    out->global_extracts = in.global_extracts;
    out->local_extracts = in.local_extracts;
    out->events_inserted = in.events_inserted;
    out->decrease_keys = in.decrease_keys;
}

}  // namespace

extern "C" {

const char* gknn_last_error(void) { return g_last_error.c_str(); }

const char* gknn_version(void) { return "1.0.0"; }

gknn_format gknn_format_detect(const char* text, size_t len) {
    if (!text) return GKNN_FORMAT_EDGELIST;
    return graphknn::detect_format(std::string_view(text, len)) ==
                   graphknn::Format::dimacs
               ? GKNN_FORMAT_DIMACS
               : GKNN_FORMAT_EDGELIST;
}

gknn_status gknn_graph_parse(const char* text, size_t len, gknn_format format,
                             gknn_graph** out) {
    return guarded([&] {
        require(text != nullptr, "text is NULL");
        require(out != nullptr, "out is NULL");
        std::string_view view(text, len);
        auto graph = graphknn::parse_graph(view, require_format(view, format));
        *out = new gknn_graph{std::move(graph)};
    });
}

gknn_status gknn_graph_load(const char* path, gknn_format format, gknn_graph** out) {
    return guarded([&] {
        require(path != nullptr, "path is NULL");
        require(out != nullptr, "out is NULL");
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError(std::string("cannot open '") + path + "'");
        std::ostringstream buffer;
        buffer << in.rdbuf();
        if (in.bad()) throw IoError(std::string("cannot read '") + path + "'");
        std::string text = std::move(buffer).str();
        auto graph = graphknn::parse_graph(text, require_format(text, format));
        *out = new gknn_graph{std::move(graph)};
    });
}

gknn_status gknn_graph_from_edges(uint32_t n, size_t m, const uint32_t* src,
                                  const uint32_t* dst, const double* weight,
                                  gknn_graph** out) {
    return guarded([&] {
        require(out != nullptr, "out is NULL");
        require(m == 0 || (src && dst && weight), "edge array is NULL");
        std::vector<graphknn::EdgeRecord> edges;
        edges.reserve(m);
        for (size_t i = 0; i < m; ++i) edges.push_back({src[i], dst[i], weight[i]});
        *out = new gknn_graph{graphknn::Graph::from_edges(n, edges)};
    });
}

gknn_status gknn_graph_random(uint32_t n, uint64_t m, uint64_t weight_min,
                              uint64_t weight_max, uint64_t seed, gknn_graph** out) {
    return guarded([&] {
        require(out != nullptr, "out is NULL");
        *out = new gknn_graph{
            graphknn::random_graph(n, m, weight_min, weight_max, seed)};
    });
}

gknn_status gknn_graph_reverse(const gknn_graph* g, gknn_graph** out) {
    return guarded([&] {
        require(g != nullptr, "graph is NULL");
        require(out != nullptr, "out is NULL");
        *out = new gknn_graph{g->impl.reversed()};
    });
}

uint32_t gknn_graph_vertex_count(const gknn_graph* g) {
    return g ? g->impl.vertex_count() : 0;
}

uint64_t gknn_graph_edge_count(const gknn_graph* g) {
    return g ? g->impl.edge_count() : 0;
}

void gknn_graph_free(gknn_graph* g) { delete g; }

gknn_status gknn_knn_all(const gknn_graph* g, uint32_t k, gknn_mode mode,
                         gknn_table** out, gknn_run_stats* stats) {
    return guarded([&] {
        require(g != nullptr, "graph is NULL");
        require(out != nullptr, "out is NULL");
        graphknn::RunStats run;
        auto table = graphknn::knn_all(g->impl, k, require_mode(mode), &run);
        export_stats(run, stats);
        *out = new gknn_table{std::move(table)};
    });
}

gknn_status gknn_knn_terminals(const gknn_graph* g, uint32_t k,
                               const uint32_t* terminals, size_t terminal_count,
                               gknn_mode mode, gknn_table** out,
                               gknn_run_stats* stats) {
    return guarded([&] {
        require(g != nullptr, "graph is NULL");
        require(out != nullptr, "out is NULL");
        require(terminals != nullptr && terminal_count > 0,
                "terminal set must be non-empty");
        graphknn::RunStats run;
        auto table = graphknn::knn_from_terminals(
            g->impl, k, std::span<const uint32_t>(terminals, terminal_count),
            require_mode(mode), &run);
        export_stats(run, stats);
        *out = new gknn_table{std::move(table)};
    });
}

gknn_status gknn_knn_randomized(const gknn_graph* g, uint32_t k, uint32_t confidence,
                                uint64_t seed, uint32_t threads, gknn_table** out) {
    return guarded([&] {
        require(g != nullptr, "graph is NULL");
        require(out != nullptr, "out is NULL");
        auto table = graphknn::randomized_knn(g->impl, k, confidence, seed, threads);
        *out = new gknn_table{std::move(table)};
    });
}

gknn_status gknn_knn_brute_force(const gknn_graph* g, uint32_t k,
                                 const uint32_t* terminals, size_t terminal_count,
                                 uint32_t threads, gknn_table** out) {
    return guarded([&] {
        require(g != nullptr, "graph is NULL");
        require(out != nullptr, "out is NULL");
        std::optional<std::span<const uint32_t>> term;
        if (terminals) {
            require(terminal_count > 0, "terminal set must be non-empty");
            term = std::span<const uint32_t>(terminals, terminal_count);
        } else {
            require(terminal_count == 0, "terminal_count nonzero but terminals NULL");
        }
        auto table = graphknn::brute_force_knn(g->impl, k, term, threads);
        *out = new gknn_table{std::move(table)};
    });
}

uint64_t gknn_round_count(uint32_t n, uint32_t k, uint32_t confidence) {
    uint64_t rounds = 0;
    gknn_status status =
        guarded([&] { rounds = graphknn::round_count(n, k, confidence); });
    return status == GKNN_OK ? rounds : 0;
}

uint32_t gknn_table_k(const gknn_table* t) { return t ? t->impl.k : 0; }

uint32_t gknn_table_vertex_count(const gknn_table* t) {
    return t ? static_cast<uint32_t>(t->impl.rows.size()) : 0;
}

uint32_t gknn_table_row_size(const gknn_table* t, uint32_t v) {
    if (!t || v >= t->impl.rows.size()) return 0;
    return static_cast<uint32_t>(t->impl.rows[v].size());
}

gknn_status gknn_table_entry(const gknn_table* t, uint32_t v, uint32_t rank,
                             uint32_t* source, double* distance) {
    return guarded([&] {
        require(t != nullptr, "table is NULL");
        require(v < t->impl.rows.size(), "vertex out of range");
        require(rank < t->impl.rows[v].size(), "rank out of range");
        const graphknn::NeighborEntry& e = t->impl.rows[v][rank];
        if (source) *source = e.source;
        if (distance) *distance = e.distance;
    });
}

int gknn_table_equal(const gknn_table* a, const gknn_table* b) {
    if (!a || !b) return a == b;
    return a->impl == b->impl ? 1 : 0;
}

gknn_status gknn_table_to_string(const gknn_table* t, char** out) {
    return guarded([&] {
        require(t != nullptr, "table is NULL");
        require(out != nullptr, "out is NULL");
        std::string text = graphknn::table_to_tsv(t->impl);
        char* buf = new char[text.size() + 1];
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out = buf;
    });
}

void gknn_string_free(char* s) { delete[] s; }

void gknn_table_free(gknn_table* t) { delete t; }

}  // extern "C"
