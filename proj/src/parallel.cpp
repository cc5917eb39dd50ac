#include "opuc/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace opuc {

namespace {
int g_workers = 0;

int detect_workers() {
    if (const char* env = std::getenv("OPUC_MESO_WORKERS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    if (hc == 0) hc = 1;
    return static_cast<int>(hc > 8 ? 8 : hc);
}
}  // namespace

int worker_count() {
    if (g_workers >= 1) return g_workers;
    return detect_workers();
}

void set_worker_count(int n) { g_workers = n >= 1 ? n : 0; }

namespace {
thread_local bool g_inside_parallel = false;
}

void parallel_for_chunks(std::int64_t begin, std::int64_t end, std::int64_t chunk_size,
                         const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (end <= begin) return;
    if (chunk_size < 1) chunk_size = 1;
    std::int64_t nchunks = (end - begin + chunk_size - 1) / chunk_size;
    int workers = g_inside_parallel ? 1 : worker_count();
    if (workers <= 1 || nchunks == 1) {
        for (std::int64_t c = 0; c < nchunks; ++c) {
            std::int64_t i0 = begin + c * chunk_size;
            std::int64_t i1 = std::min(end, i0 + chunk_size);
            fn(i0, i1);
        }
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto work = [&]() {
        g_inside_parallel = true;
        for (;;) {
            std::int64_t c = next.fetch_add(1);
            if (c >= nchunks) {
                g_inside_parallel = false;
                return;
            }
            std::int64_t i0 = begin + c * chunk_size;
            std::int64_t i1 = std::min(end, i0 + chunk_size);
            fn(i0, i1);
        }
    };
    std::vector<std::thread> pool;
    int nthreads = static_cast<int>(std::min<std::int64_t>(workers, nchunks));
    pool.reserve(static_cast<std::size_t>(nthreads - 1));
    for (int t = 0; t < nthreads - 1; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

}  // namespace opuc
