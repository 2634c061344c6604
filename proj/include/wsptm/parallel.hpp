#pragma once

#include <cstddef>
#include <functional>

namespace wsptm {

// Worker count: `requested` if positive, else hardware concurrency, always
// capped by the WSPTM_THREADS environment variable when it is set.
int effective_threads(int requested);

// Runs fn(chunk_index, begin, end) over [0, n) split into n_chunks contiguous
// chunks. Chunk boundaries depend only on n and n_chunks, never on the worker
// count, so per-chunk partial results can be reduced in chunk order to give
// output that is independent of how many threads actually ran.
void parallel_chunks(std::size_t n, int n_chunks, int threads,
                     const std::function<void(int, std::size_t, std::size_t)>& fn);

}  // namespace wsptm
