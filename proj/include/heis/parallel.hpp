#pragma once

// Chunked parallel loop. Work is split into fixed-size chunks whose
// boundaries do not depend on the thread count, so any per-chunk state
// (RNG streams, partial reductions) is reproducible.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace heis {

/// 0 means "all hardware threads".
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

inline std::size_t chunk_count(std::size_t count, std::size_t chunk) {
    return chunk == 0 ? 0 : (count + chunk - 1) / chunk;
}

/// Calls fn(chunk_index, begin, end) for every chunk of [0, count).
template <class Fn>
void parallel_for_chunks(std::size_t count, std::size_t chunk, unsigned threads, Fn&& fn) {
    const std::size_t chunks = chunk_count(count, chunk);
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(chunks, 1)));
    auto run = [&](std::size_t c) { fn(c, c * chunk, std::min(count, (c + 1) * chunk)); };
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) run(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= chunks) return;
                try {
                    run(c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next.store(chunks);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace heis
