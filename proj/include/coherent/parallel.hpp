#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace coherent {

/// Worker count from COHERENT_KIT_THREADS (0 or unset = hardware concurrency).
inline std::size_t thread_count()
{
    std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const char* env = std::getenv("COHERENT_KIT_THREADS");
    if (env == nullptr || *env == '\0') {
        return hw;
    }
    try {
        long v = std::stol(env);
        if (v <= 0) {
            return hw;
        }
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        return hw;
    }
}

/// Runs body(i) for i in [0, n) on contiguous chunks. Each index is written by
/// exactly one worker, so results never depend on scheduling.
template <typename Body>
void parallel_for(std::size_t n, Body&& body)
{
    std::size_t workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

/// Pairwise (cascade) summation; fixed association order for a given length.
template <typename T>
T pairwise_sum(std::span<const T> values)
{
    constexpr std::size_t block = 16;
    if (values.size() <= block) {
        T acc{};
        for (const T& v : values) {
            acc += v;
        }
        return acc;
    }
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& values)
{
    return pairwise_sum(std::span<const T>(values));
}

} // namespace coherent
