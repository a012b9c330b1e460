#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace sawsum {

// Worker count: SAWSUM_WORKERS overrides hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("SAWSUM_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs f(job) for job in [0, jobs). Results must be written to per-job slots;
// scheduling order carries no information, so output is identical for any
// worker count.
template <class F>
void parallel_for(long long jobs, F&& f, int workers = 0) {
    if (jobs <= 0) return;
    if (workers <= 0) workers = worker_count();
    workers = static_cast<int>(std::min<long long>(workers, jobs));
    if (workers <= 1) {
        for (long long j = 0; j < jobs; ++j) f(j);
        return;
    }
    std::atomic<long long> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const long long j = next.fetch_add(1);
                if (j >= jobs || failed.load()) return;
                try {
                    f(j);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace sawsum
