#ifndef MEMOHEAT_PARALLEL_HPP
#define MEMOHEAT_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace memoheat {

// Worker count from an explicit request, else MEMOHEAT_JOBS, else 1.
unsigned resolve_jobs(unsigned requested);

// Runs body(i) for i in [0, count) on up to `jobs` threads.  Each index is
// processed exactly once; if several bodies throw, the exception of the
// lowest index is rethrown so failures are reported deterministically.
template <class Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body)
{
    if (count == 0)
        return;
    const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace memoheat

#endif
