#pragma once

#include <cstddef>
#include <functional>

namespace sck {

// Number of workers used for `items` work items. Capped by the SCK_THREADS
// environment variable when set, otherwise by hardware concurrency.
int worker_count(std::size_t items);

// Runs fn(begin, end) over contiguous chunks of [0, n), possibly from
// multiple threads. Chunk boundaries depend only on n and the worker count,
// never on scheduling, so writes into per-index slots are reproducible.
// Callers must keep chunks independent; reductions happen after the call.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace sck
