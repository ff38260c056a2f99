#include "cbl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace cbl {

void parallel_for(int n, int jobs, const std::function<void(int)>& f) {
    jobs = std::clamp(jobs, 1, std::max(n, 1));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) f(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace cbl
