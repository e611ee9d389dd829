#include "psq/special_functions.hpp"

#include <cmath>
#include <sstream>

#include "psq/errors.hpp"

namespace psq {

namespace {

// ---------------------------------------------------------------------------
// Double-double helpers. A value is represented as an unevaluated sum
// hi + lo with |lo| <= ulp(hi)/2, giving ~32 significant digits. This is
// enough headroom to absorb the cancellation in the Maclaurin series of the
// Airy functions up to |x| = 9 (worst case loses ~16 digits).
// ---------------------------------------------------------------------------

struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

DD quick_two_sum(double a, double b) { // requires |a| >= |b|
    const double s = a + b;
    return {s, b - (s - a)};
}

DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

DD dd_div_d(DD a, double b) {
    const double q1 = a.hi / b;
    const DD p = two_prod(q1, b);
    const double q2 = ((a.hi - p.hi) - p.lo + a.lo) / b;
    return quick_two_sum(q1, q2);
}

// ---------------------------------------------------------------------------
// Maclaurin series. With w = x^3:
//   f(x)  = 1 + sum_k w^k / prod((3j)(3j-1)),      f'(x) = x^2/2 * (...)
//   g(x)  = x (1 + sum_k w^k / prod((3j+1)(3j))),  g'(x) = 1 + ...
//   Ai    = c1 f - c2 g,  Ai' = c1 f' - c2 g'
// Term ratios are exact small rationals, so each term is generated to
// double-double accuracy from its predecessor.
// ---------------------------------------------------------------------------

// Ai(0) and Ai'(0) to double-double precision. Keeping the low-order limbs
// matters: for x near the hand-over point the combination c1 f - c2 g
// cancels ~e^{2 zeta} of headroom, so an error of one ulp in the constants
// alone would destroy most of the result.
constexpr DD kAiZero{0.3550280538878172, 2.05233632436212e-17};
constexpr DD kAiPrimeZero{-0.2588194037928068, 2.522243111610832e-17};

DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

AiryValue airy_series_impl(double x) {
    const DD w = dd_mul(two_prod(x, x), DD{x, 0.0}); // x^3 in double-double

    DD f{1.0, 0.0};
    DD g{x, 0.0};
    DD fp{0.0, 0.0};
    DD gp{1.0, 0.0};

    DD tf{1.0, 0.0};
    DD tg{x, 0.0};
    DD tfp = dd_div_d(two_prod(x, x), 2.0);
    DD tgp{1.0, 0.0};
    fp = dd_add(fp, tfp);

    for (int k = 1; k <= 400; ++k) {
        const double k3 = 3.0 * k;
        tf = dd_div_d(dd_mul(tf, w), k3 * (k3 - 1.0));
        tg = dd_div_d(dd_mul(tg, w), (k3 + 1.0) * k3);
        tgp = dd_div_d(dd_mul(tgp, w), k3 * (k3 - 2.0));
        f = dd_add(f, tf);
        g = dd_add(g, tg);
        gp = dd_add(gp, tgp);
        if (k >= 2) {
            tfp = dd_div_d(dd_mul(tfp, w), (k3 - 1.0) * (k3 - 3.0));
            fp = dd_add(fp, tfp);
        }
        const double mag = std::abs(tf.hi) + std::abs(tg.hi) + std::abs(tgp.hi);
        if (mag < 1e-34 * (std::abs(f.hi) + std::abs(g.hi) + 1.0)) break;
    }

    const DD ai = dd_add(dd_mul(f, kAiZero), dd_mul(g, kAiPrimeZero));
    const DD aip = dd_add(dd_mul(fp, kAiZero), dd_mul(gp, kAiPrimeZero));
    return {x, ai.hi + ai.lo, aip.hi + aip.lo};
}

// ---------------------------------------------------------------------------
// Large-|x| asymptotics. With zeta = (2/3)|x|^{3/2} and the classical
// coefficient sequences
//   u_0 = 1,  u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / (216 k (2k-1))
//   v_k = u_k (6k+1)/(1-6k)
// the alternating sums S_u = sum (-1)^k u_k zeta^{-k} (and S_v likewise)
// deliver absolute accuracy ~e^{-2 zeta} at optimal truncation; at the
// hand-over point |x| = 9 that is ~1e-16 relative, so the two evaluation
// branches agree to full working precision.
// ---------------------------------------------------------------------------

constexpr double kInvTwoSqrtPi = 0.28209479177387814347; // 1/(2 sqrt(pi))

// Partial sums of sum (-1)^k u_k / zeta^k and sum (-1)^k v_k / zeta^k,
// truncated at the smallest term.
void asymptotic_sums(double zeta, double& su, double& sv) {
    su = 1.0;
    sv = 1.0;
    double u = 1.0;
    double term_prev = 1.0;
    double sign = 1.0;
    for (int k = 1; k <= 60; ++k) {
        u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / (216.0 * k * (2.0 * k - 1.0));
        const double v = u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        const double term = u / std::pow(zeta, k);
        if (term > term_prev) break; // divergent tail reached
        sign = -sign;
        su += sign * term;
        sv += sign * v / std::pow(zeta, k);
        if (term < 1e-18) break;
        term_prev = term;
    }
}

AiryValue airy_asymptotic_positive(double x) {
    const double sx = std::sqrt(x);
    const double zeta = (2.0 / 3.0) * x * sx;
    double su, sv;
    asymptotic_sums(zeta, su, sv);
    const double x14 = std::sqrt(sx);
    const double e = std::exp(-zeta);
    const double ai = kInvTwoSqrtPi * e / x14 * su;
    const double aip = -kInvTwoSqrtPi * x14 * e * sv;
    return {x, ai, aip};
}

AiryValue airy_asymptotic_negative(double x) {
    const double t = -x;
    const double st = std::sqrt(t);
    const double zeta = (2.0 / 3.0) * t * st;
    const double t14 = std::sqrt(st);

    // Even/odd splits of the u and v sequences.
    double ue = 1.0, uo = 0.0, ve = 1.0, vo = 0.0;
    double u = 1.0;
    double zk = 1.0; // zeta^{-k}
    double term_prev = 1.0;
    for (int k = 1; k <= 60; ++k) {
        u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / (216.0 * k * (2.0 * k - 1.0));
        const double v = u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        zk /= zeta;
        const double term = u * zk;
        if (term > term_prev) break;
        // (-1)^m with m = k/2 alternates within each parity class.
        const double s = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            ue += s * term;
            ve += s * v * zk;
        } else {
            uo += s * term;
            vo += s * v * zk;
        }
        if (term < 1e-18) break;
        term_prev = term;
    }

    const double c = std::cos(zeta - 0.78539816339744830962);
    const double s = std::sin(zeta - 0.78539816339744830962);
    const double inv_sqrt_pi = 0.56418958354775628695;
    const double ai = inv_sqrt_pi / t14 * (c * ue + s * uo);
    const double aip = inv_sqrt_pi * t14 * (s * ve - c * vo);
    return {x, ai, aip};
}

constexpr double kSeriesLimit = 9.0;

} // namespace

double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << "gamma_fn requires a positive finite argument, got " << x;
        throw DomainError(os.str());
    }
    return std::tgamma(x);
}

AiryValue airy(double x) {
    if (!std::isfinite(x) || std::abs(x) > 20.0) {
        std::ostringstream os;
        os << "airy argument out of supported range [-20, 20]: " << x;
        throw DomainError(os.str());
    }
    if (std::abs(x) <= kSeriesLimit) return airy_series_impl(x);
    return x > 0.0 ? airy_asymptotic_positive(x) : airy_asymptotic_negative(x);
}

double airy_max_root() {
    // Largest zero of Ai, bracketed by the sign change in [-3, -2] and
    // bisected to machine precision. Cached after the first call.
    static const double root = [] {
        double lo = -3.0, hi = -2.0; // Ai(-3) < 0, Ai(-2) > 0
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (airy(mid).ai < 0.0)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-16) break;
        }
        return 0.5 * (lo + hi);
    }();
    return root;
}

double airy_prime_max_root() {
    static const double root = [] {
        double lo = -2.0, hi = -0.5; // Ai'(-2) > 0, Ai'(-0.5) < 0
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (airy(mid).ai_prime > 0.0)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-16) break;
        }
        return 0.5 * (lo + hi);
    }();
    return root;
}

namespace {

// Logarithmic derivative Ai'(u)/Ai(u) for u >= 9 via the asymptotic sums;
// evaluating the ratio directly sidesteps the e^{-zeta} underflow that the
// individual functions would hit for u beyond ~110.
double airy_log_derivative_large(double u) {
    const double su_sqrt = std::sqrt(u);
    const double zeta = (2.0 / 3.0) * u * su_sqrt;
    double su, sv;
    asymptotic_sums(zeta, su, sv);
    return -su_sqrt * sv / su;
}

} // namespace

double solve_r1(double eta) {
    if (!std::isfinite(eta) || std::abs(eta) > 50.0) {
        std::ostringstream os;
        os << "solve_r1 supports |eta| <= 50, got " << eta;
        throw DomainError(os.str());
    }
    const double shift = 0.25 * eta * eta;
    const double pole = airy_max_root(); // argument where Ai vanishes

    // Sign of F(r) = Ai'(u) + (eta/2) Ai(u), u = r + eta^2/4. Above u = 9
    // both Airy functions are positive, so the sign equals that of
    // Ai'/Ai + eta/2, which stays representable for any u.
    auto f_sign = [&](double r) {
        const double u = r + shift;
        if (u >= 9.0) {
            return airy_log_derivative_large(u) + 0.5 * eta;
        }
        const AiryValue v = airy(u);
        return v.ai_prime + 0.5 * eta * v.ai;
    };

    // F < 0 at the scan start (the log-derivative is below -|eta|/2 there)
    // and F -> Ai'(pole) > 0 as u decreases to the first zero of Ai, so a
    // downward scan is guaranteed to bracket the largest root.
    const double step = 0.05;
    const double scan_top = 3.0 + std::abs(eta);
    double r_hi = scan_top;
    double f_hi = f_sign(r_hi);
    double r_lo = r_hi;
    bool bracketed = false;
    while (r_lo + shift - step > pole + 1e-9) {
        r_lo -= step;
        const double f_lo = f_sign(r_lo);
        if ((f_lo > 0.0) != (f_hi > 0.0)) {
            bracketed = true;
            break;
        }
        r_hi = r_lo;
        f_hi = f_lo;
    }
    if (!bracketed) {
        std::ostringstream os;
        os << "no sign change of the spectral root condition in the scan window [" << r_lo << ", "
           << scan_top << "] for eta = " << eta;
        throw ConvergenceError(os.str());
    }

    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (r_lo + r_hi);
        const double fm = f_sign(mid);
        if ((fm > 0.0) == (f_hi > 0.0)) {
            r_hi = mid;
            f_hi = fm;
        } else {
            r_lo = mid;
        }
        if (r_hi - r_lo < 1e-15 * (1.0 + std::abs(mid))) break;
    }
    return 0.5 * (r_lo + r_hi);
}

} // namespace psq
