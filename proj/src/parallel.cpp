#include "autocomb/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace autocomb {

namespace {
std::atomic<int> g_threads{0}; // 0 = hardware_concurrency
}

void set_num_threads(int n) { g_threads.store(n > 0 ? n : 0); }

int num_threads() {
    int n = g_threads.load();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    int t = num_threads();
    if (t <= 1 || n < 64) {
        fn(0, n);
        return;
    }
    std::size_t workers = std::min<std::size_t>(t, n);
    std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t b = w * chunk;
        std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& th : pool) th.join();
}

} // namespace autocomb
