#pragma once

// Deterministic chunked sampling: the sample range is cut into fixed-size
// chunks, each chunk draws from its own stream keyed by (seed, chunk index),
// and per-chunk results are reduced in chunk order. Results therefore do not
// depend on how many workers ran the chunks.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace klein::detail {

inline constexpr std::uint64_t chunk_size = 1u << 16;

inline std::mt19937_64 chunk_stream(std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32),
                      0x6b6c6e66u};
    return std::mt19937_64(seq);
}

/// Uniform double in the open interval (0, 1) from 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Calls fn(chunk_index, first_sample, count) for every chunk and returns the
/// per-chunk results in chunk order.
template <class Result, class Fn>
std::vector<Result> run_chunks(std::uint64_t samples, unsigned workers, Fn&& fn) {
    const std::uint64_t chunks = (samples + chunk_size - 1) / chunk_size;
    std::vector<Result> results(chunks);
    auto body = [&](std::atomic<std::uint64_t>& next) {
        for (std::uint64_t c = next++; c < chunks; c = next++) {
            const std::uint64_t first = c * chunk_size;
            results[c] = fn(c, first, std::min(chunk_size, samples - first));
        }
    };
    std::atomic<std::uint64_t> next{0};
    const unsigned n = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(chunks, 1)));
    if (n <= 1) {
        body(next);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned w = 0; w < n; ++w) pool.emplace_back([&] { body(next); });
    }
    return results;
}

}  // namespace klein::detail
