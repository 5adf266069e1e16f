#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fraclimit {

//! Static block partition of [0, n) over up to `workers` threads. body(begin, end, w)
//! runs on block w. Exceptions from any block are rethrown after joining.
template <class Body>
void parallel_blocks(std::size_t n, int workers, Body body) {
    const std::size_t w = static_cast<std::size_t>(std::max(1, workers));
    const std::size_t nb = std::min<std::size_t>(w, std::max<std::size_t>(n, 1));
    if (nb <= 1) {
        body(std::size_t{0}, n, 0);
        return;
    }
    std::vector<std::exception_ptr> errors(nb);
    std::vector<std::thread> threads;
    for (std::size_t b = 0; b < nb; ++b) {
        std::size_t lo = n * b / nb, hi = n * (b + 1) / nb;
        threads.emplace_back([&, lo, hi, b] {
            try {
                body(lo, hi, static_cast<int>(b));
            } catch (...) {
                errors[b] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline int blocks_for(std::size_t n, int workers) {
    return static_cast<int>(std::min<std::size_t>(std::max(1, workers), std::max<std::size_t>(n, 1)));
}

}  // namespace fraclimit
