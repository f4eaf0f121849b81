#pragma once

#include <cstddef>
#include <functional>

namespace erz {

/// Worker threads to use: ERZ_THREADS if set and positive, else the hardware count.
unsigned worker_count();

/// Runs body(chunk) for chunk = 0..chunks-1 on up to worker_count() threads.
/// Chunks are claimed dynamically; callers that need reproducible sums must
/// reduce per-chunk results in chunk order afterwards.
void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

}  // namespace erz
