#ifndef PSQ_RNG_HPP
#define PSQ_RNG_HPP

#include <cmath>
#include <cstdint>

namespace psq {

// 64-bit mix (splitmix64 finalizer).  Statistically strong enough for
// Monte Carlo and, crucially, a pure function of its input, which makes the
// generator below counter-based: output i never depends on outputs < i.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based stream: draw i of stream k is mix64(key(k) + i*gamma).
// Streams derived from distinct (seed, index) pairs are independent, so
// replications can be split across threads with bit-identical results.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_index)
        : key_(mix64(seed ^ mix64(stream_index * 0xD1342543DE82EF95ULL + 0x632BE59BD9B4E019ULL))),
          counter_(0) {}

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

    // uniform on (0,1), never exactly 0 or 1
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

// Welford running statistics; merge() is exact regardless of partition, so
// per-thread accumulators combine deterministically.
struct RunningStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double n1 = static_cast<double>(count);
        const double n2 = static_cast<double>(other.count);
        const double d = other.mean - mean;
        mean += d * n2 / (n1 + n2);
        m2 += other.m2 + d * d * n1 * n2 / (n1 + n2);
        count += other.count;
    }

    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double stderr_mean() const {
        return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
};

} // namespace psq

#endif // PSQ_RNG_HPP
