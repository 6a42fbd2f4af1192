#pragma once

// Output helpers: bit-stable number formatting, CSV tables and a small
// worker pool whose results come back in submission order.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace equant {

// 17 significant digits, lowercase scientific notation ("1.0000000000000000e+00").
std::string format_number(double v);

using Cell = std::variant<double, long long, std::string, bool>;

std::string format_cell(const Cell& c);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    void add_row(std::vector<Cell> row);
    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t rows() const { return rows_.size(); }

    void write(std::ostream& out) const;
    std::string str() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

// EQUANT_THREADS when set to a positive integer, otherwise the hardware
// concurrency (at least 1).
int worker_count();

// Evaluates f(0..n-1) on up to `workers` threads. Results keep index order;
// the exception of the lowest failing index is rethrown.
template <typename F>
auto parallel_map(std::size_t n, F f, int workers = worker_count()) -> std::vector<decltype(f(std::size_t{}))> {
    using R = decltype(f(std::size_t{}));
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    const std::size_t pool = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(workers), n));
    auto run = [&](std::size_t first) {
        for (std::size_t i = first; i < n; i += pool) {
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (pool <= 1) {
        run(0);
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(run, t);
        for (auto& th : threads) th.join();
    }
    std::vector<R> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

}  // namespace equant
