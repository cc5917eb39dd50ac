#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace opuc {

/// Worker count used by parallel loops. Resolution order: explicit
/// set_worker_count(), OPUC_MESO_WORKERS, hardware concurrency (capped at 8).
int worker_count();
void set_worker_count(int n);

/// Run fn(i0, i1) over disjoint chunks covering [begin, end). Chunk boundaries
/// depend only on chunk_size, never on the worker count, so any per-chunk
/// output is schedule-independent.
void parallel_for_chunks(std::int64_t begin, std::int64_t end, std::int64_t chunk_size,
                         const std::function<void(std::int64_t, std::int64_t)>& fn);

/// Deterministic parallel reduction: partial(i0, i1) is evaluated per chunk and
/// the partials are summed in chunk order.
template <typename T, typename F>
T parallel_sum(std::int64_t begin, std::int64_t end, std::int64_t chunk_size, F partial) {
    if (end <= begin) return T{};
    std::int64_t nchunks = (end - begin + chunk_size - 1) / chunk_size;
    std::vector<T> parts(static_cast<std::size_t>(nchunks), T{});
    parallel_for_chunks(begin, end, chunk_size, [&](std::int64_t i0, std::int64_t i1) {
        std::int64_t c = (i0 - begin) / chunk_size;
        parts[static_cast<std::size_t>(c)] = partial(i0, i1);
    });
    T total{};
    for (const T& p : parts) total += p;
    return total;
}

}  // namespace opuc
