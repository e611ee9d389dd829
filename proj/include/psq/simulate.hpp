#ifndef PSQ_SIMULATE_HPP
#define PSQ_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "psq/model.hpp"

namespace psq {

// Monte Carlo sojourn samples.  For conditional runs n_initial is the
// occupancy seen on arrival (others in system); for stationary runs each
// sample's seen occupancy is recorded in initial_states and blocked_count
// tallies arrivals lost at the capacity wall.
struct SojournSamples {
    ModelParams params;
    bool stationary;
    int n_initial; // -1 for stationary
    std::uint64_t seed;
    std::vector<double> samples;
    std::vector<int> initial_states; // per sample (stationary runs)
    std::uint64_t blocked_count;
};

// Sojourn of a tagged arrival that finds n others in the system (n in
// 0..K-1).  Event-race simulation: with m customers present the total
// departure rate is 1 and each is the leaver with probability 1/m; arrivals
// at rate rho while m < K.  Replications use disjoint counter-based streams
// keyed by (seed, replication), so results are bit-identical for any thread
// count.
SojournSamples simulate_conditional(const ModelParams& params, int n, std::size_t count,
                                    std::uint64_t seed, int threads = 1);

// Stationary version: a background queue-length chain is warmed past
// 50/|theta_s|, then every admitted arrival is tagged (its sojourn is
// simulated on an independent stream, which is exact by memorylessness) and
// every refused arrival increments blocked_count.
SojournSamples simulate_stationary(const ModelParams& params, std::size_t count,
                                   std::uint64_t seed);

} // namespace psq

#endif // PSQ_SIMULATE_HPP
