/// @file parallel.hpp
/// @brief Deterministic work partitioning. Chunk boundaries are fixed by
///        the problem size, never by the worker count, so every reduction
///        combines the same partial results in the same order and output
///        stays byte-identical for any parallelism degree.
#pragma once

#include <cstddef>
#include <functional>

namespace turbcloud {

/// Number of workers to use: `requested` if > 0, otherwise the hardware
/// concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

/// Runs fn(begin, end, chunk_index) over [0, n) split into fixed-size
/// chunks. Chunks are distributed dynamically over `threads` workers;
/// fn must write only to per-chunk slots.
void parallel_chunks(std::size_t n, std::size_t chunk_size, unsigned threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// Convenience: index-parallel loop, one call per chunk element range.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

} // namespace turbcloud
