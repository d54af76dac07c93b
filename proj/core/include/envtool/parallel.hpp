#pragma once

#include <cstddef>
#include <functional>

namespace envtool {

// Thread cap: ENVELOPE_TOOL_THREADS when set, else hardware concurrency
// (at most 8). Values < 1 clamp to 1.
unsigned threadCap();

// Runs fn(row) for row in [0, rows). Work items write only to their own
// slots, so results are identical for any thread count. The first exception
// thrown by a worker is rethrown on the calling thread.
void parallelForRows(std::size_t rows, const std::function<void(std::size_t)>& fn);

}  // namespace envtool
