#pragma once

// Sharded Monte Carlo driver. Each shard owns an independent counter-based
// RNG stream and accumulates privately; shard results combine in index order,
// so estimates are bit-reproducible for a fixed (seed, shard count).

#include <cstdint>
#include <cmath>
#include <exception>
#include <thread>
#include <vector>

#include "h3geo/rng.hpp"

namespace h3geo {

struct Estimate {
    double value = 0.0;
    double se = 0.0;  // standard error of `value`
    std::uint64_t n = 0;
};

namespace detail {

struct Accum {
    double sum = 0.0;
    double sumsq = 0.0;
    std::uint64_t n = 0;
};

template <class F>
std::vector<Accum> run_shards(std::uint64_t n, int shards, std::uint64_t seed,
                              std::uint64_t stream_base, F&& per_sample) {
    if (shards < 1) shards = 1;
    std::vector<Accum> acc(static_cast<std::size_t>(shards));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(shards));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(shards));
    const std::uint64_t base = n / static_cast<std::uint64_t>(shards);
    const std::uint64_t rem = n % static_cast<std::uint64_t>(shards);
    for (int s = 0; s < shards; ++s) {
        const std::uint64_t ns = base + (static_cast<std::uint64_t>(s) < rem ? 1 : 0);
        pool.emplace_back([&, s, ns] {
            try {
                Philox rng(seed, stream_base + static_cast<std::uint64_t>(s));
                Accum a;
                for (std::uint64_t i = 0; i < ns; ++i) {
                    const double x = per_sample(rng);
                    a.sum += x;
                    a.sumsq += x * x;
                    a.n += 1;
                }
                acc[static_cast<std::size_t>(s)] = a;
            } catch (...) {
                errors[static_cast<std::size_t>(s)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return acc;
}

inline Estimate combine(const std::vector<Accum>& acc, double mass) {
    double sum = 0.0, sumsq = 0.0;
    std::uint64_t n = 0;
    for (const auto& a : acc) {
        sum += a.sum;
        sumsq += a.sumsq;
        n += a.n;
    }
    Estimate e;
    e.n = n;
    if (n == 0) return e;
    const double mean = sum / static_cast<double>(n);
    e.value = mass * mean;
    if (n > 1) {
        const double var =
            std::max(0.0, (sumsq - sum * mean) / static_cast<double>(n - 1));
        e.se = mass * std::sqrt(var / static_cast<double>(n));
    }
    return e;
}

} // namespace detail

// Estimate mass * E[f]; f(rng) is one sample.
template <class F>
Estimate mc_mean(double mass, std::uint64_t n, int shards, std::uint64_t seed,
                 std::uint64_t stream_base, F&& per_sample) {
    return detail::combine(
        detail::run_shards(n, shards, seed, stream_base,
                           std::forward<F>(per_sample)),
        mass);
}

struct EstimatePair {
    Estimate first, second;
    double diff_se = 0.0;  // standard error of (second - first)
};

// Two correlated estimates from the same sample stream; per_sample fills a
// double[2]. Useful when the paired difference is the quantity under test.
template <class F>
EstimatePair mc_mean_pair(double mass, std::uint64_t n, int shards,
                          std::uint64_t seed, std::uint64_t stream_base,
                          F&& per_sample) {
    struct Acc2 {
        detail::Accum a, b, d;
    };
    const int ns_shards = shards < 1 ? 1 : shards;
    std::vector<Acc2> acc(static_cast<std::size_t>(ns_shards));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(ns_shards));
    std::vector<std::thread> pool;
    const std::uint64_t base = n / static_cast<std::uint64_t>(ns_shards);
    const std::uint64_t rem = n % static_cast<std::uint64_t>(ns_shards);
    for (int s = 0; s < ns_shards; ++s) {
        const std::uint64_t ns = base + (static_cast<std::uint64_t>(s) < rem ? 1 : 0);
        pool.emplace_back([&, s, ns] {
            try {
                Philox rng(seed, stream_base + static_cast<std::uint64_t>(s));
                Acc2 a;
                double xy[2];
                for (std::uint64_t i = 0; i < ns; ++i) {
                    per_sample(rng, xy);
                    a.a.sum += xy[0];
                    a.a.sumsq += xy[0] * xy[0];
                    a.a.n += 1;
                    a.b.sum += xy[1];
                    a.b.sumsq += xy[1] * xy[1];
                    a.b.n += 1;
                    const double d = xy[1] - xy[0];
                    a.d.sum += d;
                    a.d.sumsq += d * d;
                    a.d.n += 1;
                }
                acc[static_cast<std::size_t>(s)] = a;
            } catch (...) {
                errors[static_cast<std::size_t>(s)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<detail::Accum> av, bv, dv;
    for (const auto& a : acc) {
        av.push_back(a.a);
        bv.push_back(a.b);
        dv.push_back(a.d);
    }
    EstimatePair out;
    out.first = detail::combine(av, mass);
    out.second = detail::combine(bv, mass);
    out.diff_se = detail::combine(dv, mass).se;
    return out;
}

} // namespace h3geo
