#include "acoelab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace acoelab::parallel {

int max_threads() {
    if (const char* env = std::getenv("ACOE_LAB_THREADS")) {
        try {
            const int v = std::stoi(env);
            return std::clamp(v, 1, 256);
        } catch (...) {
            return 1;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

void for_chunks(std::int64_t n,
                const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn) {
    if (n <= 0)
        return;
    const std::int64_t n_chunks = std::min<std::int64_t>(n, 64);
    const std::int64_t chunk = (n + n_chunks - 1) / n_chunks;
    const int workers = std::min<int>(max_threads(), static_cast<int>(n_chunks));

    const auto run_chunk = [&](std::int64_t c) {
        const std::int64_t begin = c * chunk;
        const std::int64_t end = std::min(n, begin + chunk);
        if (begin < end)
            fn(c, begin, end);
    };

    if (workers <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c)
            run_chunk(c);
        return;
    }

    std::atomic<std::int64_t> counter{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::int64_t c = counter.fetch_add(1); c < n_chunks; c = counter.fetch_add(1))
                run_chunk(c);
        });
    for (auto& t : pool)
        t.join();
}

} // namespace acoelab::parallel
