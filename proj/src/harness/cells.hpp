#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mkv::harness::detail {

// Evaluates cell(a, b) for every a < rows, b < cols and stores the result at
// a * cols + b. Cells are independent, so the output does not depend on the
// thread count. The first exception thrown by any cell is rethrown.
template <class Cell>
auto run_cells(std::size_t rows, std::size_t cols, int threads, Cell&& cell) {
    using value = std::decay_t<decltype(cell(std::size_t{}, std::size_t{}))>;
    const long total = static_cast<long>(rows * cols);
    std::vector<value> out(rows * cols);
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    // Largest rows first: they dominate the cost.
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads > 0 ? threads : 1)
    for (long l = 0; l < total; ++l) {
        const std::size_t a = rows - 1 - static_cast<std::size_t>(l) / cols;
        const std::size_t b = static_cast<std::size_t>(l) % cols;
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            out[a * cols + b] = cell(a, b);
        } catch (...) {
#pragma omp critical(mkv_cell_failure)
            if (!failure) failure = std::current_exception();
            failed.store(true, std::memory_order_relaxed);
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace mkv::harness::detail
