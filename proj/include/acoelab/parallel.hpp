#pragma once

#include <cstdint>
#include <functional>

namespace acoelab::parallel {

/// Worker cap: the ACOE_LAB_THREADS environment variable when set (clamped to
/// [1, 256]), otherwise the hardware concurrency (at most 8).
int max_threads();

/// Runs fn(chunk, begin, end) over [0, n) split into a fixed chunk grid that
/// depends only on n, never on the worker count. Writing per-chunk (or
/// per-item) results and reducing them in chunk order afterwards therefore
/// gives bit-identical output for every thread count.
void for_chunks(std::int64_t n, const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn);

} // namespace acoelab::parallel
