#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace graphknn {

// Partition [0, count) into `chunks` contiguous ranges and run
// fn(chunk_index, begin, end) for each, on std::threads when chunks > 1.
// The partition depends only on (count, chunks), so callers that merge
// per-chunk results in chunk order stay deterministic.
template <class Fn>
void run_chunked_indexed(std::size_t count, std::size_t chunks, Fn&& fn) {
    if (count == 0) return;
    chunks = std::clamp<std::size_t>(chunks, 1, count);
    if (chunks == 1) {
        fn(std::size_t{0}, std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t begin = count * c / chunks;
        std::size_t end = count * (c + 1) / chunks;
        pool.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
    }
    for (std::thread& t : pool) t.join();
}

template <class Fn>
void run_chunked(std::size_t count, unsigned threads, Fn&& fn) {
    run_chunked_indexed(count, threads <= 1 ? 1 : threads,
                        [&fn](std::size_t, std::size_t begin, std::size_t end) {
                            fn(begin, end);
                        });
}

}  // namespace graphknn
