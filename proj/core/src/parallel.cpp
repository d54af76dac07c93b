#include "envtool/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace envtool {

unsigned threadCap() {
    unsigned cap = std::thread::hardware_concurrency();
    if (cap == 0) cap = 1;
    if (cap > 8) cap = 8;
    if (const char* env = std::getenv("ENVELOPE_TOOL_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        cap = n < 1 ? 1u : static_cast<unsigned>(n);
    }
    return cap;
}

void parallelForRows(std::size_t rows, const std::function<void(std::size_t)>& fn) {
    const unsigned threads = threadCap();
    if (threads <= 1 || rows <= 1) {
        for (std::size_t r = 0; r < rows; ++r) fn(r);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr firstError;
    std::mutex errMutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= rows) return;
            try {
                fn(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(errMutex);
                if (!firstError) firstError = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, rows));
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (firstError) std::rethrow_exception(firstError);
}

}  // namespace envtool
