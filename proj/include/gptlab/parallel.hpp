#pragma once

#include <thread>
#include <vector>

namespace gptlab {

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Callers store
/// results by index, so the outcome is independent of the schedule.
template <class Fn>
void parallel_for(int jobs, int count, Fn fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    std::atomic<int> next{0};
    int threads = std::min(jobs, count);
    for (int t = 0; t < threads; ++t)
        workers.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& w : workers) w.join();
}

}  // namespace gptlab
