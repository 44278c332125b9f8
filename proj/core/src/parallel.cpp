#include "ec/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace ec {

void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& fn) {
    if (count <= 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    auto workers = static_cast<std::int64_t>(threads > 0 ? static_cast<unsigned>(threads) : hw);
    workers = std::min<std::int64_t>(workers, count);
    if (workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= count) break;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace ec
