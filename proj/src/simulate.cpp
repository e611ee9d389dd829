#include "psq/simulate.hpp"

#include <algorithm>
#include <sstream>
#include <thread>
#include <vector>

#include "psq/errors.hpp"
#include "psq/rng.hpp"
#include "psq/spectrum.hpp"

namespace psq {

namespace {

// Sojourn of the tagged customer given m-1 = n others at its arrival.
// The race: with m present, departures occur at total rate 1 (the server is
// shared) and each present customer is the leaver with probability 1/m;
// arrivals occur at rate rho while the capacity admits them.
double tagged_sojourn(double rho, int capacity, int n, CounterRng& rng) {
    int m = n + 1;
    double t = 0.0;
    for (;;) {
        const double rate = 1.0 + (m < capacity ? rho : 0.0);
        t += rng.next_exponential(rate);
        if (rng.next_unit() * rate < 1.0) {
            // a departure: the tagged one with probability 1/m
            if (rng.next_unit() * m < 1.0) return t;
            --m;
        } else {
            ++m;
        }
    }
}

} // namespace

SojournSamples simulate_conditional(const ModelParams& params, int n, std::size_t count,
                                    std::uint64_t seed, int threads) {
    if (n < 0 || n >= params.capacity) {
        std::ostringstream os;
        os << "initial occupancy " << n << " outside 0 .. " << params.capacity - 1;
        throw DomainError(os.str());
    }

    SojournSamples out{params, false, n, seed, {}, {}, 0};
    out.samples.resize(count);

    // Replication i always uses stream i of the seed, so the sample set is
    // a pure function of (params, n, count, seed) whatever the thread count.
    auto run_block = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            CounterRng rng(seed, i);
            out.samples[i] = tagged_sojourn(params.rho, params.capacity, n, rng);
        }
    };

    const int n_threads = std::max(
        1, std::min({threads, 256, static_cast<int>(std::min<std::size_t>(count, 256))}));
    if (n_threads <= 1) {
        run_block(0, count);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int w = 0; w < n_threads; ++w) {
            const std::size_t lo = count * static_cast<std::size_t>(w) /
                                   static_cast<std::size_t>(n_threads);
            const std::size_t hi = count * static_cast<std::size_t>(w + 1) /
                                   static_cast<std::size_t>(n_threads);
            pool.emplace_back(run_block, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

SojournSamples simulate_stationary(const ModelParams& params, std::size_t count,
                                   std::uint64_t seed) {
    const double rho = params.rho;
    const int k = params.capacity;

    SojournSamples out{params, true, -1, seed, {}, {}, 0};
    out.samples.reserve(count);
    out.initial_states.reserve(count);

    // Background occupancy chain of the queue (births rho while below K,
    // deaths 1 while nonempty), on a stream disjoint from every tagged one.
    CounterRng bg(seed, 0x8000000000000000ULL);
    int m = 0;

    // Warm long past the relaxation time so arrivals sample the stationary
    // law (PASTA gives weights proportional to rho^n below the wall).
    const double t_warm = 50.0 / std::abs(eigen_theta_s(params));
    double t = 0.0;
    while (t < t_warm) {
        const double rate = (m > 0 ? 1.0 : 0.0) + (m < k ? rho : 0.0);
        t += bg.next_exponential(rate);
        if (t >= t_warm) break;
        const double u = bg.next_unit() * rate;
        if (m < k && u < rho) {
            ++m;
        } else if (m > 0) {
            --m;
        }
    }

    std::uint64_t sample_index = 0;
    while (out.samples.size() < count) {
        const double rate = rho + (m > 0 ? 1.0 : 0.0);
        bg.next_exponential(rate); // event time; only the order matters here
        if (bg.next_unit() * rate < rho) {
            // an arrival: blocked at the wall, otherwise tagged and admitted
            if (m == k) {
                ++out.blocked_count;
            } else {
                out.initial_states.push_back(m);
                CounterRng rng(seed, sample_index++);
                out.samples.push_back(tagged_sojourn(rho, k, m, rng));
                ++m;
            }
        } else {
            --m;
        }
    }
    return out;
}

} // namespace psq
