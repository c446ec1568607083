#ifndef ICEBREAKER_PARALLEL_HPP
#define ICEBREAKER_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace icebreaker {

/// Runs fn(i) for i in [0, n) across hardware threads. Work items must write
/// only to their own slots so results are independent of scheduling. Nested
/// calls run serially to avoid oversubscription.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    static thread_local bool inside = false;
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (inside || workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w]() {
            inside = true;
            for (std::size_t i = w; i < n; i += workers) fn(i);
            inside = false;
        });
    }
    for (auto& t : threads) t.join();
}

} // namespace icebreaker

#endif
