#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace amc::detail {

/// Worker count: AMCSIM_THREADS when set and positive, else the hardware
/// concurrency (at least 1).
inline int worker_count() {
    if (const char* env = std::getenv("AMCSIM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(state, i) for i in [0, count), where each worker thread owns one
/// `state` built by make_state(). Tasks are claimed atomically; the first
/// exception is rethrown after all workers join. Serial when one worker.
template <typename StateFactory, typename Fn>
void parallel_for_stateful(int count, StateFactory&& make_state, Fn&& fn) {
    const int workers = std::min(worker_count(), count);
    if (workers <= 1) {
        auto state = make_state();
        for (int i = 0; i < count; ++i) fn(state, i);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&]() {
        try {
            auto state = make_state();
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= count) break;
                fn(state, i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace amc::detail
