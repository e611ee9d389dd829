#include "psq/green.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include "psq/errors.hpp"
#include "psq/quadrature.hpp"

namespace psq {

namespace {

// ---------------------------------------------------------------------------
// Contour machinery for the H-side integrals.
//
// All H-type quantities are integrals of  z^p [optional (z-1)] (z-z_-)^{-1} w^a
// around the segment joining the characteristic roots.  We evaluate them on
// the confocal ellipse z = c + v cosh(s0 + i phi) with foci exactly at the
// roots, because on that curve
//     z - z_minus = 2 v cosh^2(zeta/2),   z - z_plus = 2 v sinh^2(zeta/2),
//     w = (z - z_minus)/(z - z_plus) = coth^2(zeta/2),
// so the branch factor becomes an explicit principal-branch exponential and
// dz/(z - z_minus) collapses to tanh(zeta/2) d phi -- no cancellation and no
// branch tracking.  The trapezoid rule on the periodic parameter converges
// geometrically.
// ---------------------------------------------------------------------------

struct ContourJob {
    int power;          // exponent of z in the integrand
    bool times_zminus1; // multiply the integrand by (z - 1)
};

// The ellipse "margin" cosh(s0) = 1 + 2m controls the trade-off between
// distance from the branch segment (favours big m) and the variation of z^p
// along the contour (favours small m).  Keeping p * m * |v| / (|c| + |v|)
// bounded keeps the integrand's dynamic range level in the power.
double contour_margin(Complex c, Complex v, int max_power) {
    const double ratio = std::abs(c) / std::abs(v);
    return std::min(0.25, 1.5 * (ratio + 1.0) / static_cast<double>(std::max(max_power, 1)));
}

std::vector<Scaled> contour_integrate(const RootData& rd, const std::vector<ContourJob>& jobs,
                                      double margin_scale = 1.0) {
    if (std::abs(rd.theta.imag()) > 1e-12 * (1.0 + std::abs(rd.theta))) {
        throw DomainError("contour integrals are defined here for real transform arguments only");
    }
    const Complex c = 0.5 * (rd.z_plus + rd.z_minus);
    const Complex v = 0.5 * (rd.z_plus - rd.z_minus);
    const Complex exponent = 2.0 * rd.alpha - 1.0; // (2a-1) log coth = a log w + log tanh

    int max_power = 1;
    for (const auto& job : jobs) max_power = std::max(max_power, job.power);

    const std::size_t m = jobs.size();
    std::vector<Complex> result_value(m);
    std::vector<double> result_ls(m);
    std::vector<double> result_mean(m);

    // Retry with a tighter ellipse if the realness check fails or the node
    // budget is exhausted; both indicate the contour resolves the branch
    // point structure poorly.
    double margin = contour_margin(c, v, max_power) * margin_scale;
    double worst_im_residual = 0.0;
    bool node_budget_hit = false;
    for (int attempt = 0; attempt < 4; ++attempt, margin *= 0.5) {
        const double s0 = std::acosh(1.0 + 2.0 * margin);

        std::vector<Complex> prev_value(m);
        std::vector<double> prev_ls(m, 0.0);
        std::vector<char> converged(m, 0);
        bool have_prev = false;
        bool all_ok = false;

        for (int n_nodes = 64; n_nodes <= 16384; n_nodes *= 2) {
            // Per-node base quantities shared by every job.
            std::vector<Complex> log_z(n_nodes), base(n_nodes), z_m1(n_nodes);
            for (int j = 0; j < n_nodes; ++j) {
                const double phi = 2.0 * M_PI * j / n_nodes;
                const Complex zeta(s0, phi);
                const Complex z = c + v * std::cosh(zeta);
                const Complex th = std::tanh(0.5 * zeta); // nonzero: Re zeta > 0
                log_z[j] = std::log(z);
                base[j] = -exponent * std::log(th); // log(coth) = -log(tanh)
                z_m1[j] = z - 1.0;
            }

            bool level_all = true;
            for (std::size_t q = 0; q < m; ++q) {
                const double p = static_cast<double>(jobs[q].power);
                const bool times = jobs[q].times_zminus1;

                double ls = -std::numeric_limits<double>::infinity();
                for (int j = 0; j < n_nodes; ++j) {
                    double lm = base[j].real() + (jobs[q].power != 0 ? p * log_z[j].real() : 0.0);
                    if (times) {
                        const double a = std::abs(z_m1[j]);
                        lm += (a > 0.0) ? std::max(std::log(a), -50.0) : -50.0;
                    }
                    ls = std::max(ls, lm);
                }

                Complex sum(0.0, 0.0);
                double abs_sum = 0.0;
                for (int j = 0; j < n_nodes; ++j) {
                    Complex l = base[j];
                    if (jobs[q].power != 0) l += p * log_z[j];
                    Complex term = std::exp(l - ls);
                    if (times) term *= z_m1[j];
                    sum += term;
                    abs_sum += std::abs(term);
                }
                const Complex value = sum / static_cast<double>(n_nodes);
                const double mean_abs = abs_sum / static_cast<double>(n_nodes);

                if (have_prev) {
                    const Complex aligned = prev_value[q] * std::exp(prev_ls[q] - ls);
                    const double diff = std::abs(value - aligned);
                    // The mean_abs floor sits above the jitter of summing
                    // ~10^4 terms, so heavy interior cancellation cannot keep
                    // the test failing forever.
                    converged[q] =
                        diff <= std::max(1e-12 * std::abs(value), 4e-14 * mean_abs) ? 1 : 0;
                }
                if (!converged[q]) level_all = false;
                prev_value[q] = value;
                prev_ls[q] = ls;
                result_value[q] = value;
                result_ls[q] = ls;
                result_mean[q] = mean_abs;
            }
            have_prev = true;
            if (level_all) {
                all_ok = true;
                break;
            }
        }

        if (!all_ok) {
            node_budget_hit = true;
            continue; // node budget exhausted: tighten the ellipse
        }

        // The exact integrals are real for real theta (the integrand pairs
        // conjugately under phi reflection); a residual imaginary part above
        // the quadrature noise floor means the contour is unhealthy.
        bool real_ok = true;
        for (std::size_t q = 0; q < m; ++q) {
            const double im = std::abs(result_value[q].imag());
            if (im > std::max(1e-9 * std::abs(result_value[q]), 1e-12 * result_mean[q])) {
                real_ok = false;
                worst_im_residual =
                    std::max(worst_im_residual, im / std::max(std::abs(result_value[q]),
                                                              std::numeric_limits<double>::min()));
                break;
            }
        }
        if (!real_ok) continue;

        std::vector<Scaled> out(m);
        for (std::size_t q = 0; q < m; ++q)
            out[q] = Scaled(result_value[q].real(), result_ls[q]);
        return out;
    }

    std::ostringstream os;
    os << "contour quadrature failed for theta = " << rd.theta.real();
    if (node_budget_hit) os << "; node budget exhausted";
    if (worst_im_residual > 0.0)
        os << "; imaginary residual " << worst_im_residual << " above the realness tolerance";
    throw ContourError(os.str());
}

// ---------------------------------------------------------------------------
// Algebraic evaluations of the H recurrence solution.  The contour above
// converges geometrically, but its integrand oscillates with amplitude
// ~e^{pi |Im a|} between the coalescence points and carries ~e^{c a} of
// cancelling headroom just above the upper one, so in double precision it
// cannot resolve H_n arbitrarily close to coalescence.  Two exact rewritings
// cover those regions:
//   * above the band, expanding the branch factor about z = z_minus gives
//       H_n = sum_k C(n,k) z_minus^{n-k} (z_plus - z_minus)^k (a)_k / k!,
//     a sum of positive terms -- stable for any a;
//   * everywhere, H_n satisfies the defining three-term recurrence
//       (n+1) rho H_{n+1} = (n+1)(1+rho+theta) H_n - n H_{n-1},
//       H_0 = 1,  H_1 = (1+rho+theta)/rho,
//     and H is the dominant solution inside and above the band, so forward
//     recursion is stable relative to the solution's own envelope.
// The public entry points dispatch on the root configuration.
// ---------------------------------------------------------------------------

Scaled h_closed_sum(double zm, double l_gap, double alpha, int n) {
    const double log_ratio = std::log(l_gap) - std::log(zm);
    double t_log = n * std::log(zm); // k = 0 term
    Scaled sum = scaled_exp(t_log);
    for (int k = 0; k < n; ++k) {
        t_log += std::log(static_cast<double>(n - k)) + std::log(alpha + k) + log_ratio -
                 2.0 * std::log(static_cast<double>(k + 1));
        sum += scaled_exp(t_log);
    }
    return sum;
}

std::vector<Scaled> h_recurrence_many(double rho, double theta, int n_max) {
    std::vector<Scaled> h(static_cast<std::size_t>(n_max) + 1);
    h[0] = Scaled(1.0, 0.0);
    const double b = 1.0 + rho + theta;
    if (n_max >= 1) h[1] = Scaled(b / rho, 0.0);
    for (int n = 1; n < n_max; ++n) {
        const std::size_t u = static_cast<std::size_t>(n);
        h[u + 1] = (h[u] * b - h[u - 1] * (n / (n + 1.0))) * (1.0 / rho);
    }
    return h;
}

enum class RootRegion { above_band, in_band, below_band };

RootRegion classify_roots(const RootData& rd) {
    if (std::abs(rd.theta.imag()) > 1e-12 * (1.0 + std::abs(rd.theta)))
        throw DomainError("H evaluation is defined here for real transform arguments only");
    const double tol = 1e-10;
    if (std::abs(rd.z_minus.imag()) > tol * (1.0 + std::abs(rd.z_minus)))
        return RootRegion::in_band;
    return rd.z_minus.real() > 0.0 ? RootRegion::above_band : RootRegion::below_band;
}

// Contour health limits; see the block comment above for what breaks past
// them.  In the band the quadrature's cancellation noise is roughly
// 4e-14 * e^(pi |Im a|), so |Im a| <= 3 keeps the result inside the 1e-9
// accuracy contract.  Below the band the roots are negative and the closed
// form loses its positivity, so the recurrence takes over unconditionally.
constexpr double kMaxContourAlpha = 40.0;
constexpr double kMaxContourImAlpha = 3.0;

bool contour_healthy(const RootData& rd, RootRegion region) {
    switch (region) {
    case RootRegion::above_band:
        return rd.alpha.real() <= kMaxContourAlpha;
    case RootRegion::in_band:
        return std::abs(rd.alpha.imag()) <= kMaxContourImAlpha;
    case RootRegion::below_band:
        return false;
    }
    return false;
}

double rho_of(const RootData& rd) { return 1.0 / (rd.z_plus * rd.z_minus).real(); }

// ---------------------------------------------------------------------------
// Real-integral machinery for the G side.  Valid only when both roots are
// real and positive (real theta above the upper coalescence point), where
// a = alpha > 1.  The substitution z = z_minus (1 - tau^{1/a}) absorbs the
// (z_minus - z)^{a-1} endpoint weight exactly:
//   G_p = z_minus^{p+a} L^{-a} / a * int_0^1 (1-s)^p (1 + z_minus s/L)^{-a} dtau
// with s = tau^{1/a} and L = z_plus - z_minus.  The remaining integrand lies
// in (0, 1]; tanh-sinh quadrature handles the residual endpoint behaviour.
// ---------------------------------------------------------------------------

struct RealRoots {
    double zm, zp, alpha;
};

RealRoots require_real_roots(const RootData& rd) {
    const double tol = 1e-10;
    if (std::abs(rd.theta.imag()) > tol * (1.0 + std::abs(rd.theta)) ||
        std::abs(rd.z_minus.imag()) > tol * (1.0 + std::abs(rd.z_minus)) ||
        rd.z_minus.real() <= 0.0 || rd.z_plus.real() <= rd.z_minus.real()) {
        throw DomainError(
            "G-side integral requires real theta above the upper coalescence point");
    }
    return {rd.z_minus.real(), rd.z_plus.real(), rd.alpha.real()};
}

// Shared quadrature core: integrates (1-s)^p (1 + zm*s/L)^{-a} [optional
// extra factor (zm(1-s) - 1)] over tau in (0,1) and attaches the log prefix.
Scaled g_side_integral(const RealRoots& r, int power, bool times_zminus1) {
    const double l_gap = r.zp - r.zm;
    const double p = static_cast<double>(power);

    auto integrand = [&](double tau) {
        const double log_tau = std::log(tau);
        const double sigma = std::exp(log_tau / r.alpha);          // tau^{1/a}
        const double one_minus_sigma = -std::expm1(log_tau / r.alpha);
        double lf = -r.alpha * std::log1p(r.zm * sigma / l_gap);
        if (power != 0) {
            if (one_minus_sigma <= 0.0) return 0.0;
            lf += p * std::log(one_minus_sigma);
        }
        double f = std::exp(lf);
        if (times_zminus1) f *= r.zm * one_minus_sigma - 1.0;
        return f;
    };

    bool ok = false;
    const double abs_floor = 1e-15 * (1.0 + (times_zminus1 ? r.zm : 0.0));
    const double integral = tanh_sinh_01(integrand, 1e-12, abs_floor, &ok);
    if (!ok) {
        std::ostringstream os;
        os << "G-side quadrature did not converge (power " << power << ")";
        throw ConvergenceError(os.str());
    }
    const double log_prefix =
        (p + r.alpha) * std::log(r.zm) - std::log(r.alpha) - r.alpha * std::log(l_gap);
    return Scaled(integral, log_prefix);
}

} // namespace

Scaled g_integral(const RootData& rd, int n) {
    if (n < 0) throw DomainError("negative recurrence index");
    return g_side_integral(require_real_roots(rd), n, false);
}

std::vector<Scaled> g_integral_many(const RootData& rd, int n_max) {
    if (n_max < 0) throw DomainError("negative recurrence index");
    const RealRoots r = require_real_roots(rd);
    std::vector<Scaled> out(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) out[static_cast<std::size_t>(n)] = g_side_integral(r, n, false);
    return out;
}

Scaled delta_g(const RootData& rd, int capacity) {
    if (capacity < 1) throw DomainError("capacity must be at least 1");
    return g_side_integral(require_real_roots(rd), capacity - 1, true);
}

Scaled h_contour(const RootData& rd, int n) {
    if (n < 0) throw DomainError("negative recurrence index");
    const RootRegion region = classify_roots(rd);
    if (contour_healthy(rd, region)) return contour_integrate(rd, {{n, false}}).front();
    if (region == RootRegion::above_band) {
        const double zm = rd.z_minus.real();
        return h_closed_sum(zm, rd.z_plus.real() - zm, rd.alpha.real(), n);
    }
    return h_recurrence_many(rho_of(rd), rd.theta.real(), n).back();
}

Scaled h_contour_scaled_margin(const RootData& rd, int n, double margin_scale) {
    if (n < 0) throw DomainError("negative recurrence index");
    if (!(margin_scale > 0.0) || margin_scale > 1.0)
        throw DomainError("margin scale must lie in (0, 1]");
    return contour_integrate(rd, {{n, false}}, margin_scale).front();
}

std::vector<Scaled> h_contour_many(const RootData& rd, int n_max) {
    if (n_max < 0) throw DomainError("negative recurrence index");
    const RootRegion region = classify_roots(rd);
    if (contour_healthy(rd, region)) {
        std::vector<ContourJob> jobs;
        jobs.reserve(static_cast<std::size_t>(n_max) + 1);
        for (int n = 0; n <= n_max; ++n) jobs.push_back({n, false});
        return contour_integrate(rd, jobs);
    }
    if (region == RootRegion::above_band) {
        const double zm = rd.z_minus.real();
        const double l_gap = rd.z_plus.real() - zm;
        const double a = rd.alpha.real();
        std::vector<Scaled> out(static_cast<std::size_t>(n_max) + 1);
        for (int n = 0; n <= n_max; ++n)
            out[static_cast<std::size_t>(n)] = h_closed_sum(zm, l_gap, a, n);
        return out;
    }
    return h_recurrence_many(rho_of(rd), rd.theta.real(), n_max);
}

Scaled delta_h_recurrence(const ModelParams& params, double theta) {
    const auto h = h_recurrence_many(params.rho, theta, params.capacity);
    return h[static_cast<std::size_t>(params.capacity)] -
           h[static_cast<std::size_t>(params.capacity) - 1];
}

Scaled delta_h(const RootData& rd, int capacity) {
    if (capacity < 1) throw DomainError("capacity must be at least 1");
    const RootRegion region = classify_roots(rd);
    if (contour_healthy(rd, region))
        return contour_integrate(rd, {{capacity - 1, true}}).front();
    if (region == RootRegion::above_band) {
        const double zm = rd.z_minus.real();
        const double l_gap = rd.z_plus.real() - zm;
        const double a = rd.alpha.real();
        return h_closed_sum(zm, l_gap, a, capacity) - h_closed_sum(zm, l_gap, a, capacity - 1);
    }
    const auto h = h_recurrence_many(rho_of(rd), rd.theta.real(), capacity);
    return h[static_cast<std::size_t>(capacity)] - h[static_cast<std::size_t>(capacity) - 1];
}

double wronskian_check(const RootData& rd, int l) {
    if (l < 0) throw DomainError("negative recurrence index");
    const RealRoots r = require_real_roots(rd);

    const Scaled g_l = g_side_integral(r, l, false);
    const Scaled g_l1 = g_side_integral(r, l + 1, false);
    const Scaled h_l = h_contour(rd, l);
    const Scaled h_l1 = h_contour(rd, l + 1);

    const Scaled lhs = g_l * h_l1 - g_l1 * h_l;

    const double rho = 1.0 / (r.zp * r.zm);
    const double m_factor = rd.m_factor.real();
    // 1 / (rho M (l+1) rho^l), carried in log form
    const double log_rhs =
        -((l + 1) * std::log(rho) + std::log(m_factor) + std::log(static_cast<double>(l + 1)));
    const Scaled diff = lhs - scaled_exp(log_rhs);
    if (diff.is_zero()) return 0.0;
    return std::exp(diff.log_abs() - log_rhs);
}

GreenPair green_pair(const RootData& rd, int n) {
    const Scaled g = g_integral(rd, n);
    const Scaled h = h_contour(rd, n);
    return {n, g.value, h.value, g.log_scale, h.log_scale};
}

} // namespace psq
