#pragma once
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "gaplab/rng.hpp"

namespace gaplab {

// Runs fn(index, rng) for index in [0, count); replica `index` always uses
// stream (seed, base_stream + index), so the result vector is identical for
// any thread count and reductions can consume it in index order.
template <typename T>
std::vector<T> map_replicas(std::uint64_t seed, std::uint64_t base_stream, std::size_t count,
                            int threads, const std::function<T(std::size_t, Rng&)>& fn) {
    std::vector<T> out(count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            Rng rng(seed, base_stream + i);
            out[i] = fn(i, rng);
        }
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + static_cast<std::size_t>(threads) - 1) /
                              static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = static_cast<std::size_t>(t) * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi]() {
            for (std::size_t i = lo; i < hi; ++i) {
                Rng rng(seed, base_stream + i);
                out[i] = fn(i, rng);
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace gaplab
