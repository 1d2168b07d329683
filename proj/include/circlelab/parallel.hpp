#ifndef CIRCLELAB_PARALLEL_HPP
#define CIRCLELAB_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace circlelab {

// Worker-pool capability handed down from the harness. Modules never spawn
// their own workers beyond this. Block decomposition is a function of the
// problem size only, and reductions run in block-index order, so numeric
// results do not depend on the worker count.
struct Parallelism {
    unsigned threads = 1;

    static Parallelism hardware() {
        unsigned n = std::thread::hardware_concurrency();
        return Parallelism{n ? n : 1};
    }
};

// Runs fn(block) for block = 0..n_blocks-1 on up to `par.threads` workers.
// Each block writes only its own state; the caller reduces in block order.
template <typename Fn>
void parallel_blocks(const Parallelism& par, std::size_t n_blocks, Fn&& fn) {
    if (n_blocks == 0) return;
    unsigned workers = par.threads == 0 ? 1 : par.threads;
    if (workers <= 1 || n_blocks == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
        return;
    }
    if (workers > n_blocks) workers = static_cast<unsigned>(n_blocks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= n_blocks || failed.load()) return;
                try {
                    fn(b);
                } catch (...) {
                    if (!failed.exchange(true)) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load() && err) std::rethrow_exception(err);
}

// Convenience: split [0, n) into fixed-size chunks (block count independent of
// the worker count) and run fn(begin, end) per chunk.
template <typename Fn>
void parallel_ranges(const Parallelism& par, std::size_t n, std::size_t chunk, Fn&& fn) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    std::size_t blocks = (n + chunk - 1) / chunk;
    parallel_blocks(par, blocks, [&](std::size_t b) {
        std::size_t lo = b * chunk;
        std::size_t hi = lo + chunk < n ? lo + chunk : n;
        fn(lo, hi);
    });
}

}

#endif
