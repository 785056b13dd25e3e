#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace symerg {

// Runs body(begin, end, chunk) over `jobs` contiguous chunks of [0, n).
// Chunk boundaries depend only on n and jobs; callers reduce per-chunk
// results in chunk order, so results do not depend on scheduling.
template <class Body>
void parallel_chunks(std::size_t n, unsigned jobs, Body&& body) {
    jobs = std::max(1u, jobs);
    if (jobs == 1 || n < 2) {
        body(std::size_t{0}, n, 0u);
        return;
    }
    const std::size_t chunks = std::min<std::size_t>(jobs, n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t b = n * c / chunks, e = n * (c + 1) / chunks;
        pool.emplace_back([&, b, e, c] {
            try {
                body(b, e, static_cast<unsigned>(c));
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Applies f to every index; out[i] = f(i).
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, F&& f) {
    std::vector<T> out(n);
    parallel_chunks(n, jobs, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t i = b; i < e; ++i) out[i] = f(i);
    });
    return out;
}

}  // namespace symerg
