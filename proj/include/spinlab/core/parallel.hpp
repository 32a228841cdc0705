#pragma once
#include <cstddef>
#include <functional>
#include <vector>

namespace spinlab {

// Worker count: SPINLAB_THREADS env var if set, else hardware concurrency.
int worker_count();

// Evaluate fn(i) for i in [0, nitems) on a pool of workers.  Work is split
// into contiguous chunks; chunk results are stored per-chunk and combined by
// the caller in ascending chunk order, so the result is independent of the
// worker count.  fn must be safe to call concurrently for distinct i.
void parallel_chunks(size_t nitems,
                     const std::function<void(size_t begin, size_t end, size_t chunk_idx)>& fn,
                     size_t* nchunks_out = nullptr, int nworkers = 0);

// number of chunks parallel_chunks will use for a given item count
size_t chunk_count(size_t nitems, int nworkers = 0);

} // namespace spinlab
