#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>

namespace fgame {

// Runs task(c) for every chunk c in [0, chunks) on up to `threads` workers.
// Chunks are claimed dynamically; callers store per-chunk results and merge
// them in chunk order so the outcome does not depend on the worker count.
// If tasks throw, the exception of the lowest failing chunk is rethrown.
void parallel_chunks(std::size_t chunks, unsigned threads, const std::function<void(std::size_t)>& task);

// Splits [0, total) into `chunks` contiguous ranges; returns [begin, end) of chunk c.
std::pair<std::uint64_t, std::uint64_t> chunk_range(std::uint64_t total, std::size_t chunks, std::size_t c);

}  // namespace fgame
