#include "spinlab/core/parallel.hpp"
#include <atomic>
#include <cstdlib>
#include <thread>

namespace spinlab {

int worker_count() {
    if (const char* e = std::getenv("SPINLAB_THREADS")) {
        int v = std::atoi(e);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Chunk geometry depends only on the item count, never on the worker count:
// partials are produced per chunk and combined in chunk order, which is what
// makes reductions bit-identical for any SPINLAB_THREADS.
static constexpr size_t kChunk = 256;

size_t chunk_count(size_t nitems, int) {
    return (nitems + kChunk - 1) / kChunk;
}

void parallel_chunks(size_t nitems,
                     const std::function<void(size_t, size_t, size_t)>& fn,
                     size_t* nchunks_out, int nworkers) {
    const size_t nchunks = chunk_count(nitems);
    if (nchunks_out) *nchunks_out = nchunks;
    if (nitems == 0) return;
    int nw = nworkers > 0 ? nworkers : worker_count();
    if (static_cast<size_t>(nw) > nchunks) nw = static_cast<int>(nchunks);

    if (nw <= 1) {
        for (size_t c = 0; c < nchunks; ++c) {
            size_t b = c * kChunk;
            size_t e = std::min(nitems, b + kChunk);
            fn(b, e, c);
        }
        return;
    }
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            size_t c = next.fetch_add(1);
            if (c >= nchunks) break;
            size_t b = c * kChunk;
            size_t e = std::min(nitems, b + kChunk);
            fn(b, e, c);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nw));
    for (int i = 0; i < nw; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
}

} // namespace spinlab
