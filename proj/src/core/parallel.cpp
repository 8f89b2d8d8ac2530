#include "parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace graphclust {

namespace {

std::atomic<int> g_user_cap{0};
thread_local bool t_in_parallel = false;

int env_cap() {
    static int cap = [] {
        const char* s = std::getenv("GRAPHCLUST_THREADS");
        if (!s) return 0;
        int v = std::atoi(s);
        return v > 0 ? v : 0;
    }();
    return cap;
}

} // namespace

int max_threads() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (int e = env_cap(); e > 0 && e < n) n = e;
    if (int u = g_user_cap.load(); u > 0 && u < n) n = u;
    return n;
}

void set_max_threads(int n) { g_user_cap.store(n > 0 ? n : 0); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    std::size_t workers = static_cast<std::size_t>(max_threads());
    if (workers > count) workers = count;
    if (workers <= 1 || t_in_parallel) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&] {
        t_in_parallel = true;
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
        t_in_parallel = false;
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    if (first_error) std::rethrow_exception(first_error);
}

} // namespace graphclust
