#pragma once

// Deterministic fan-out helpers.
//
// Work over [0, n) is cut into fixed chunks of `chunk` items. Each chunk is
// reduced sequentially in index order, and chunk partials are combined by a
// pairwise tree whose shape depends only on the number of chunks. The result
// is therefore bit-identical for any worker count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

namespace hofa::parallel {

struct Options {
    unsigned jobs = 0;            // 0 = hardware concurrency
    std::int64_t chunk = 64;      // items per chunk

    unsigned resolved_jobs() const {
        if (jobs > 0) return jobs;
        const unsigned hc = std::thread::hardware_concurrency();
        return hc == 0 ? 1u : hc;
    }
};

/// Runs body(chunk_index, begin, end) for every chunk, possibly concurrently.
template <class Body>
void for_chunks(std::int64_t n, const Options& opt, Body&& body) {
    if (n <= 0) return;
    const std::int64_t chunk = std::max<std::int64_t>(1, opt.chunk);
    const std::int64_t nchunks = (n + chunk - 1) / chunk;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::int64_t>(opt.resolved_jobs(), nchunks));
    auto run = [&](std::int64_t c) {
        const std::int64_t b = c * chunk;
        body(c, b, std::min(n, b + chunk));
    };
    if (workers <= 1) {
        for (std::int64_t c = 0; c < nchunks; ++c) run(c);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::int64_t c = next.fetch_add(1); c < nchunks; c = next.fetch_add(1)) run(c);
        });
    }
    for (auto& t : pool) t.join();
}

/// Pairwise tree sum over a vector of partials (shape fixed by size only).
template <class T>
T tree_sum(std::vector<T> v) {
    if (v.empty()) return T{};
    while (v.size() > 1) {
        std::vector<T> next((v.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < v.size(); i += 2) next[i / 2] = v[i] + v[i + 1];
        if (v.size() % 2) next.back() = v.back();
        v.swap(next);
    }
    return v.front();
}

/// Sum of term(i) over i in [0, n) with deterministic chunked tree reduction.
template <class T, class Term>
T reduce_sum(std::int64_t n, const Options& opt, Term&& term) {
    if (n <= 0) return T{};
    const std::int64_t chunk = std::max<std::int64_t>(1, opt.chunk);
    std::vector<T> partial(static_cast<std::size_t>((n + chunk - 1) / chunk), T{});
    for_chunks(n, opt, [&](std::int64_t c, std::int64_t b, std::int64_t e) {
        T acc{};
        for (std::int64_t i = b; i < e; ++i) acc += term(i);
        partial[static_cast<std::size_t>(c)] = acc;
    });
    return tree_sum(std::move(partial));
}

}  // namespace hofa::parallel
