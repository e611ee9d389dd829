#ifndef PSQ_SCALED_HPP
#define PSQ_SCALED_HPP

#include <cmath>
#include <limits>

namespace psq {

// A real number stored as value * exp(log_scale).  The recurrence solutions
// grow/decay geometrically in the index, so products and sums of them
// overflow doubles long before the final, O(1)-sized transform values do.
// Keeping an explicit log-scale lets every intermediate stay representable.
struct Scaled {
    double value = 0.0;     // kept within [1, 10) in magnitude (0 if zero)
    double log_scale = 0.0;

    Scaled() = default;
    Scaled(double v, double ls) : value(v), log_scale(ls) { normalize(); }

    static Scaled from_double(double x) { return Scaled(x, 0.0); }

    void normalize() {
        if (value == 0.0 || !std::isfinite(value)) {
            log_scale = 0.0;
            return;
        }
        const double shift = std::floor(std::log10(std::fabs(value))) * std::log(10.0);
        value *= std::exp(-shift);
        log_scale += shift;
    }

    bool is_zero() const { return value == 0.0; }
    int sign() const { return value > 0.0 ? 1 : (value < 0.0 ? -1 : 0); }

    // ln |value * exp(log_scale)|; -inf for zero
    double log_abs() const {
        if (value == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(std::fabs(value)) + log_scale;
    }

    double to_double() const { return value * std::exp(log_scale); }

    friend Scaled operator*(const Scaled& a, const Scaled& b) {
        return Scaled(a.value * b.value, a.log_scale + b.log_scale);
    }
    friend Scaled operator*(const Scaled& a, double b) {
        return Scaled(a.value * b, a.log_scale);
    }
    friend Scaled operator/(const Scaled& a, const Scaled& b) {
        return Scaled(a.value / b.value, a.log_scale - b.log_scale);
    }
    friend Scaled operator+(const Scaled& a, const Scaled& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.log_scale >= b.log_scale)
            return Scaled(a.value + b.value * std::exp(b.log_scale - a.log_scale), a.log_scale);
        return Scaled(b.value + a.value * std::exp(a.log_scale - b.log_scale), b.log_scale);
    }
    friend Scaled operator-(const Scaled& a, const Scaled& b) {
        return a + Scaled(-b.value, b.log_scale);
    }
    Scaled& operator+=(const Scaled& other) {
        *this = *this + other;
        return *this;
    }
};

// exp(ls) as a Scaled without overflow
inline Scaled scaled_exp(double ls) { return Scaled(1.0, ls); }

} // namespace psq

#endif // PSQ_SCALED_HPP
