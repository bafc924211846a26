// graphknn CLI: compute / verify / bench over the shared-library C API.
//
// Exit codes: 0 success, 1 input could not be read or parsed, 2 flag misuse,
// 3 verification mismatch.

#include <graphknn.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

struct GraphDeleter {
    void operator()(gknn_graph* g) const { gknn_graph_free(g); }
};
struct TableDeleter {
    void operator()(gknn_table* t) const { gknn_table_free(t); }
};
using GraphPtr = std::unique_ptr<gknn_graph, GraphDeleter>;
using TablePtr = std::unique_ptr<gknn_table, TableDeleter>;

[[noreturn]] void die(int code, const std::string& message) {
    std::cerr << "graphknn: " << message << '\n';
    std::exit(code);
}

// Mirrors the library's table rendering so diagnostics match table output.
std::string fmt_dist(double d) {
    char buf[64];
    if (std::rint(d) == d && std::fabs(d) <= 0x1p53) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(d));
        return std::string(buf, end);
    }
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, end);
}

struct CommonOpts {
    std::string input;
    std::uint32_t k = 1;
    std::string algo = "fast";
    std::string format = "auto";
    std::string direction = "in";
    std::string mode = "hashed";
    std::string terminals_path;
    std::uint64_t seed = 0;
    std::uint32_t confidence = 4;
    std::uint32_t threads = 1;
    bool stats = false;

    CLI::Option* mode_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* confidence_opt = nullptr;
    CLI::Option* terminals_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
};

void add_common_options(CLI::App* cmd, CommonOpts& o, bool allow_oracle) {
    cmd->add_option("input", o.input, "graph file (edgelist or DIMACS)")->required();
    cmd->add_option("--k", o.k, "neighbors per vertex")
        ->required()
        ->check(CLI::Range(std::uint32_t{1}, std::numeric_limits<std::uint32_t>::max()));
    std::vector<std::string> algos = {"fast", "randomized"};
    if (allow_oracle) algos.push_back("oracle");
    cmd->add_option("--algo", o.algo, "algorithm")
        ->check(CLI::IsMember(algos))
        ->capture_default_str();
    cmd->add_option("--format", o.format, "input format (default: sniff)")
        ->check(CLI::IsMember({"edgelist", "dimacs"}));
    cmd->add_option("--direction", o.direction,
                    "in: nearest sources by dist(u->v); out: run on the reverse "
                    "graph, nearest targets by dist(v->u)")
        ->check(CLI::IsMember({"in", "out"}))
        ->capture_default_str();
    o.mode_opt = cmd->add_option("--mode", o.mode, "fast-engine membership structure")
                     ->check(CLI::IsMember({"hashed", "bounded"}))
                     ->capture_default_str();
    o.terminals_opt =
        cmd->add_option("--terminals", o.terminals_path,
                        "file of vertex ids (graph-format indexing); only these "
                        "act as sources");
    o.seed_opt = cmd->add_option("--seed", o.seed, "randomized-algorithm seed")
                     ->capture_default_str();
    o.confidence_opt =
        cmd->add_option("--confidence", o.confidence,
                        "randomized failure exponent, >= 3")
            ->capture_default_str();
    o.threads_opt = cmd->add_option("--threads", o.threads,
                                    "worker threads for randomized/oracle runs")
                        ->check(CLI::Range(std::uint32_t{1},
                                           std::numeric_limits<std::uint32_t>::max()));
}

// Flag-combination rules; violations are usage errors (exit 2), not input
// errors.
void validate_common(const CommonOpts& o) {
    if (o.seed_opt->count() > 0 && o.algo != "randomized")
        die(2, "--seed requires --algo randomized");
    if (o.confidence_opt->count() > 0 && o.algo != "randomized")
        die(2, "--confidence requires --algo randomized");
    if (o.mode_opt->count() > 0 && o.algo != "fast")
        die(2, "--mode requires --algo fast");
    if (o.terminals_opt && o.terminals_opt->count() > 0 && o.algo == "randomized")
        die(2, "--terminals is not supported with --algo randomized");
    if (o.threads_opt->count() > 0 && o.algo == "fast")
        die(2, "--threads has no effect with --algo fast");
    if (o.stats && o.algo != "fast")
        die(2, "--stats reports fast-engine counters; use --algo fast");
    if (o.algo == "randomized" && o.confidence < 3)
        die(2, "--confidence must be >= 3");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) die(1, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) die(1, "cannot read '" + path + "'");
    return std::move(buffer).str();
}

gknn_format pick_format(const std::string& flag, const std::string& text) {
    if (flag == "edgelist") return GKNN_FORMAT_EDGELIST;
    if (flag == "dimacs") return GKNN_FORMAT_DIMACS;
    return gknn_format_detect(text.data(), text.size());
}

// Loads the graph; --direction out transposes it so the one engine answers
// the outgoing-distance question.
GraphPtr load_graph(const CommonOpts& o, gknn_format* format_out) {
    std::string text = read_file(o.input);
    gknn_format format = pick_format(o.format, text);
    if (format_out) *format_out = format;
    gknn_graph* raw = nullptr;
    if (gknn_graph_parse(text.data(), text.size(), format, &raw) != GKNN_OK)
        die(1, o.input + ": " + gknn_last_error());
    GraphPtr g(raw);
    if (o.direction == "out") {
        gknn_graph* rev = nullptr;
        if (gknn_graph_reverse(g.get(), &rev) != GKNN_OK) die(1, gknn_last_error());
        g.reset(rev);
    }
    return g;
}

// One id per line; '#' and 'c' start comments to match the two graph
// formats; DIMACS ids are 1-based like its edge lines.
std::vector<std::uint32_t> read_terminals(const std::string& path, gknn_format format,
                                          std::uint32_t n) {
    std::string text = read_file(path);
    std::vector<std::uint32_t> ids;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t begin = line.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        if (line[begin] == '#' || line[begin] == 'c') continue;
        std::size_t end = line.find_last_not_of(" \t") + 1;
        std::string_view field(line.data() + begin, end - begin);
        std::uint64_t id = 0;
        auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), id);
        if (ec != std::errc{} || p != field.data() + field.size())
            die(1, path + ": line " + std::to_string(number) + ": bad vertex id '" +
                       std::string(field) + "'");
        if (format == GKNN_FORMAT_DIMACS) {
            if (id == 0)
                die(1, path + ": line " + std::to_string(number) +
                           ": DIMACS ids are 1-based");
            --id;
        }
        if (id >= n)
            die(1, path + ": line " + std::to_string(number) + ": vertex id " +
                       std::to_string(id) + " out of range [0, " + std::to_string(n) +
                       ")");
        ids.push_back(static_cast<std::uint32_t>(id));
    }
    if (ids.empty()) die(1, path + ": no terminal ids");
    return ids;
}

gknn_mode pick_mode(const std::string& mode) {
    return mode == "bounded" ? GKNN_MODE_BOUNDED : GKNN_MODE_HASHED;
}

// Runs the selected algorithm. Library failures past this point mean bad
// input data, not flag misuse.
TablePtr run_algo(const CommonOpts& o, const gknn_graph* g,
                  const std::vector<std::uint32_t>* terminals,
                  gknn_run_stats* stats) {
    gknn_table* raw = nullptr;
    gknn_status status;
    if (o.algo == "fast") {
        status = terminals
                     ? gknn_knn_terminals(g, o.k, terminals->data(), terminals->size(),
                                          pick_mode(o.mode), &raw, stats)
                     : gknn_knn_all(g, o.k, pick_mode(o.mode), &raw, stats);
    } else if (o.algo == "randomized") {
        status = gknn_knn_randomized(g, o.k, o.confidence, o.seed, o.threads, &raw);
        if (stats) *stats = gknn_run_stats{};
    } else {
        status = gknn_knn_brute_force(g, o.k, terminals ? terminals->data() : nullptr,
                                      terminals ? terminals->size() : 0, o.threads,
                                      &raw);
        if (stats) *stats = gknn_run_stats{};
    }
    if (status != GKNN_OK) die(1, gknn_last_error());
    return TablePtr(raw);
}

void print_table(const gknn_table* t) {
    char* text = nullptr;
    if (gknn_table_to_string(t, &text) != GKNN_OK) die(1, gknn_last_error());
    std::fputs(text, stdout);
    gknn_string_free(text);
}

int cmd_compute(const CommonOpts& o) {
    validate_common(o);
    gknn_format format = GKNN_FORMAT_EDGELIST;
    GraphPtr g = load_graph(o, &format);
    std::optional<std::vector<std::uint32_t>> terminals;
    if (o.terminals_opt->count() > 0)
        terminals = read_terminals(o.terminals_path, format,
                                   gknn_graph_vertex_count(g.get()));
    gknn_run_stats stats{};
    TablePtr table =
        run_algo(o, g.get(), terminals ? &*terminals : nullptr, &stats);
    print_table(table.get());
    if (o.stats) {
        std::cerr << "relax_ops=" << stats.relax_ops << '\n'
                  << "global_extracts=" << stats.global_extracts << '\n'
                  << "local_extracts=" << stats.local_extracts << '\n'
                  << "events_inserted=" << stats.events_inserted << '\n'
                  << "decrease_keys=" << stats.decrease_keys << '\n';
    }
    return 0;
}

// Prints the first (vertex, rank) where the tables disagree and exits 3.
int report_mismatch(const gknn_table* got, const gknn_table* want) {
    std::uint32_t n = gknn_table_vertex_count(want);
    for (std::uint32_t v = 0; v < n; ++v) {
        std::uint32_t got_size = gknn_table_row_size(got, v);
        std::uint32_t want_size = gknn_table_row_size(want, v);
        std::uint32_t common = std::min(got_size, want_size);
        for (std::uint32_t r = 0; r < common; ++r) {
            std::uint32_t gs = 0, ws = 0;
            double gd = 0.0, wd = 0.0;
            gknn_table_entry(got, v, r, &gs, &gd);
            gknn_table_entry(want, v, r, &ws, &wd);
            if (gs != ws || gd != wd) {
                std::cerr << "mismatch at vertex " << v << " rank " << r
                          << ": computed (source=" << gs << ", dist=" << fmt_dist(gd)
                          << ") vs oracle (source=" << ws << ", dist=" << fmt_dist(wd)
                          << ")\n";
                return 3;
            }
        }
        if (got_size != want_size) {
            std::cerr << "mismatch at vertex " << v << ": computed row has "
                      << got_size << " entries, oracle row has " << want_size << '\n';
            return 3;
        }
    }
    // gknn_table_equal said unequal but rows agree: impossible by contract.
    std::cerr << "mismatch: tables differ but no differing entry found\n";
    return 3;
}

int cmd_verify(const CommonOpts& o) {
    validate_common(o);
    gknn_format format = GKNN_FORMAT_EDGELIST;
    GraphPtr g = load_graph(o, &format);
    std::optional<std::vector<std::uint32_t>> terminals;
    if (o.terminals_opt->count() > 0)
        terminals = read_terminals(o.terminals_path, format,
                                   gknn_graph_vertex_count(g.get()));
    const std::vector<std::uint32_t>* term = terminals ? &*terminals : nullptr;
    TablePtr got = run_algo(o, g.get(), term, nullptr);
    gknn_table* oracle_raw = nullptr;
    if (gknn_knn_brute_force(g.get(), o.k, term ? term->data() : nullptr,
                             term ? term->size() : 0, o.threads,
                             &oracle_raw) != GKNN_OK)
        die(1, gknn_last_error());
    TablePtr oracle(oracle_raw);
    if (gknn_table_equal(got.get(), oracle.get())) {
        std::cout << "ok: tables identical\n";
        return 0;
    }
    return report_mismatch(got.get(), oracle.get());
}

struct BenchOpts {
    CommonOpts common;
    std::string gen;
    std::string k_list;
    std::uint32_t reps = 1;
    CLI::Option* input_opt = nullptr;
    CLI::Option* gen_opt = nullptr;
};

std::vector<std::uint64_t> parse_uint_list(const std::string& text, std::size_t want,
                                           const char* flag) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::size_t end = comma == std::string::npos ? text.size() : comma;
        std::uint64_t value = 0;
        auto [p, ec] = std::from_chars(text.data() + pos, text.data() + end, value);
        if (ec != std::errc{} || p != text.data() + end)
            die(2, std::string(flag) + ": bad value '" + text.substr(pos, end - pos) +
                       "'");
        out.push_back(value);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (want != 0 && out.size() != want)
        die(2, std::string(flag) + ": expected " + std::to_string(want) +
                   " comma-separated values");
    return out;
}

int cmd_bench(const BenchOpts& b) {
    const CommonOpts& o = b.common;
    validate_common(o);
    if ((b.input_opt->count() > 0) == (b.gen_opt->count() > 0))
        die(2, "bench needs exactly one of --input or --gen");

    GraphPtr g;
    if (b.gen_opt->count() > 0) {
        auto spec = parse_uint_list(b.gen, 5, "--gen");
        gknn_graph* raw = nullptr;
        if (gknn_graph_random(static_cast<std::uint32_t>(spec[0]), spec[1], spec[2],
                              spec[3], spec[4], &raw) != GKNN_OK)
            die(2, std::string("--gen: ") + gknn_last_error());
        g.reset(raw);
        if (o.direction == "out") {
            gknn_graph* rev = nullptr;
            if (gknn_graph_reverse(g.get(), &rev) != GKNN_OK)
                die(1, gknn_last_error());
            g.reset(rev);
        }
    } else {
        g = load_graph(o, nullptr);
    }

    std::vector<std::uint64_t> ks = parse_uint_list(b.k_list, 0, "--k");
    for (std::uint64_t k : ks)
        if (k < 1 || k > std::numeric_limits<std::uint32_t>::max())
            die(2, "--k: values must be positive 32-bit integers");

    std::cout << "k,n,m,wall_nanos,relax_ops,global_extracts,events_inserted,"
                 "decrease_keys\n";
    std::uint32_t n = gknn_graph_vertex_count(g.get());
    std::uint64_t m = gknn_graph_edge_count(g.get());
    for (std::uint64_t k : ks) {
        for (std::uint32_t rep = 0; rep < b.reps; ++rep) {
            CommonOpts run = o;
            run.k = static_cast<std::uint32_t>(k);
            gknn_run_stats stats{};
            auto start = std::chrono::steady_clock::now();
            TablePtr table = run_algo(run, g.get(), nullptr, &stats);
            auto stop = std::chrono::steady_clock::now();
            auto nanos =
                std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start);
            std::cout << k << ',' << n << ',' << m << ',' << nanos.count() << ','
                      << stats.relax_ops << ',' << stats.global_extracts << ','
                      << stats.events_inserted << ',' << stats.decrease_keys << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k nearest neighbors under shortest-path distance"};
    app.require_subcommand(1);

    CommonOpts compute_opts;
    CLI::App* compute = app.add_subcommand("compute", "print the k-NN table");
    add_common_options(compute, compute_opts, /*allow_oracle=*/true);
    compute->add_flag("--stats", compute_opts.stats,
                      "print operation counters to stderr (fast engine only)");

    CommonOpts verify_opts;
    CLI::App* verify =
        app.add_subcommand("verify", "compare against the brute-force oracle");
    add_common_options(verify, verify_opts, /*allow_oracle=*/false);

    BenchOpts bench_opts;
    CLI::App* bench = app.add_subcommand("bench", "time runs, CSV on stdout");
    bench_opts.input_opt =
        bench->add_option("--input", bench_opts.common.input, "graph file");
    bench_opts.gen_opt = bench->add_option(
        "--gen", bench_opts.gen, "random graph n,m,weight_min,weight_max,seed");
    bench->add_option("--k", bench_opts.k_list, "comma-separated k values")
        ->required();
    bench->add_option("--reps", bench_opts.reps, "repetitions per k")
        ->check(CLI::Range(std::uint32_t{1}, std::numeric_limits<std::uint32_t>::max()))
        ->capture_default_str();
    {
        CommonOpts& o = bench_opts.common;
        bench->add_option("--algo", o.algo, "algorithm")
            ->check(CLI::IsMember({"fast", "randomized", "oracle"}))
            ->capture_default_str();
        bench->add_option("--format", o.format, "input format (default: sniff)")
            ->check(CLI::IsMember({"edgelist", "dimacs"}));
        bench->add_option("--direction", o.direction, "in|out")
            ->check(CLI::IsMember({"in", "out"}))
            ->capture_default_str();
        o.mode_opt = bench->add_option("--mode", o.mode, "fast-engine membership")
                         ->check(CLI::IsMember({"hashed", "bounded"}))
                         ->capture_default_str();
        o.seed_opt = bench->add_option("--seed", o.seed, "randomized-algorithm seed")
                         ->capture_default_str();
        o.confidence_opt = bench->add_option("--confidence", o.confidence,
                                             "randomized failure exponent, >= 3")
                              ->capture_default_str();
        o.threads_opt =
            bench->add_option("--threads", o.threads,
                              "worker threads for randomized/oracle runs")
                ->check(CLI::Range(std::uint32_t{1},
                                   std::numeric_limits<std::uint32_t>::max()));
        // bench has no terminal mode; validate_common tolerates the null.
        o.terminals_opt = nullptr;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (compute->parsed()) return cmd_compute(compute_opts);
    if (verify->parsed()) return cmd_verify(verify_opts);
    return cmd_bench(bench_opts);
}
