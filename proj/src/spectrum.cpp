#include "psq/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "psq/errors.hpp"
#include "psq/green.hpp"
#include "psq/special_functions.hpp"

namespace psq {

std::vector<double> similarity_log_scale(const ModelParams& params) {
    const int k = params.capacity;
    std::vector<double> logd(static_cast<std::size_t>(k));
    const double lr = std::log(params.rho);
    for (int n = 0; n < k; ++n)
        logd[static_cast<std::size_t>(n)] = 0.5 * n * lr + 0.5 * std::log(n + 1.0);
    return logd;
}

SymTridiag symmetrized_generator(const ModelParams& params) {
    const GeneratorMatrix a = generator_matrix(params);
    const int k = params.capacity;
    SymTridiag t;
    t.diag = a.diag;
    t.off.resize(static_cast<std::size_t>(std::max(k - 1, 0)));
    for (int i = 0; i + 1 < k; ++i)
        t.off[static_cast<std::size_t>(i)] =
            std::sqrt(params.rho * (i + 1.0) / (i + 2.0)); // sqrt(sup * sub)
    return t;
}

Spectrum eigen_spectrum(const ModelParams& params) {
    Spectrum s;
    s.eigenvalues = sturm_eigenvalues(symmetrized_generator(params));
    s.theta_s = s.eigenvalues.back();
    s.method = SpectrumMethod::eigen;
    return s;
}

double eigen_theta_s(const ModelParams& params) {
    return sturm_largest_eigenvalue(symmetrized_generator(params));
}

namespace {

double refine_root(const ModelParams& params, double lo, double hi, int sign_hi) {
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo < 1e-13 * std::max(1.0, std::abs(mid))) break;
        const int s = delta_h_recurrence(params, mid).sign();
        if (s == 0) return mid;
        if (s == sign_hi)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Downward scan for sign changes of DeltaH_K, evaluated through the scaled
// recurrence (a degree-K polynomial: smooth through the coalescence points).
// Steps shrink near both coalescence points because the roots accumulate
// there -- toward the upper one from below in the heavy-traffic regimes, and
// mirrored at the bottom of the oscillatory band.
std::vector<double> scan_roots(const ModelParams& params, double theta_min,
                               std::size_t max_roots) {
    const int k = params.capacity;
    const double c_hi = coalescence_theta(params);
    const double c_lo = lower_coalescence_theta(params);

    double theta = -std::min(1e-3, 0.01 / k);
    double prev_theta = theta;
    int prev_sign = delta_h_recurrence(params, theta).sign();

    std::vector<double> roots;
    while (theta > theta_min && roots.size() < max_roots) {
        const double dist = std::min(std::abs(theta - c_hi), std::abs(theta - c_lo));
        const double step = std::min(0.25 / k, std::max(dist / 10.0, 1e-8));
        theta -= step;
        const int sign = delta_h_recurrence(params, theta).sign();
        if (sign == 0) {
            roots.push_back(theta);
        } else if (prev_sign != 0 && sign != prev_sign) {
            roots.push_back(refine_root(params, theta, prev_theta, prev_sign));
        }
        prev_theta = theta;
        prev_sign = sign;
    }
    return roots;
}

} // namespace

double theta_s_via_deltaH(const ModelParams& params) {
    const double floor = lower_coalescence_theta(params) - 1.0;
    const std::vector<double> roots = scan_roots(params, floor, 1);
    if (roots.empty()) {
        throw NoBracket("no sign change of the boundary determinant found above the spectrum floor");
    }
    return roots.front();
}

std::vector<double> delta_h_roots(const ModelParams& params, double theta_min) {
    std::vector<double> roots =
        scan_roots(params, theta_min, std::numeric_limits<std::size_t>::max());
    std::reverse(roots.begin(), roots.end());
    return roots;
}

AsymptoticEstimate asymp_subcritical(const ModelParams& params) {
    if (!(params.rho < 1.0)) {
        throw RegimeError("the subcritical expansion requires rho < 1");
    }
    const double k = params.capacity;
    const double sr = std::sqrt(params.rho);
    const double r0 = airy_max_root();
    AsymptoticEstimate est;
    est.regime = Regime::sub;
    est.eta = (params.rho - 1.0) * std::cbrt(k * k);
    est.terms = {-(1.0 - sr) * (1.0 - sr), -sr / k, sr * r0 * std::pow(k, -4.0 / 3.0),
                 -(8.0 / 15.0) * sr * r0 * r0 * std::pow(k, -5.0 / 3.0)};
    est.theta_s_estimate = est.terms[0] + est.terms[1] + est.terms[2] + est.terms[3];
    return est;
}

AsymptoticEstimate asymp_critical(const ModelParams& params, double eta_window) {
    const double k = params.capacity;
    const double eta = (params.rho - 1.0) * std::cbrt(k * k);
    if (std::abs(eta) > eta_window) {
        std::ostringstream os;
        os << "near-critical expansion used outside its window: |eta| = " << std::abs(eta)
           << " > " << eta_window;
        throw RegimeError(os.str());
    }
    const double r1 = solve_r1(eta);
    const double corr = (16.0 * r1 * r1 * r1 + 8.0 * eta * eta * r1 * r1 +
                         (eta * eta * eta * eta + 19.0 * eta) * r1 + eta * eta * eta + 9.0) /
                        (30.0 * r1);
    AsymptoticEstimate est;
    est.regime = Regime::critical;
    est.eta = eta;
    est.terms = {-1.0 / k, r1 * std::pow(k, -4.0 / 3.0), -corr * std::pow(k, -5.0 / 3.0)};
    est.theta_s_estimate = est.terms[0] + est.terms[1] + est.terms[2];
    return est;
}

AsymptoticEstimate asymp_supercritical(const ModelParams& params) {
    if (!(params.rho > 1.0)) {
        throw RegimeError("the supercritical expansion requires rho > 1");
    }
    const double k = params.capacity;
    const double d = params.rho - 1.0;
    AsymptoticEstimate est;
    est.regime = Regime::super;
    est.eta = d * std::cbrt(k * k);
    est.terms = {-1.0 / k, -1.0 / (d * k * k), -1.0 / (d * d * k * k * k),
                 (params.rho * params.rho + 1.0) / (d * d * d * d * k * k * k * k)};
    est.theta_s_estimate = est.terms[0] + est.terms[1] + est.terms[2] + est.terms[3];
    return est;
}

ThetaSResult theta_s_auto(const ModelParams& params) {
    ThetaSResult out;
    out.exact = eigen_theta_s(params);
    const double eta = (params.rho - 1.0) * std::cbrt(static_cast<double>(params.capacity) *
                                                      params.capacity);
    if (std::abs(eta) <= 3.0) {
        out.estimate = asymp_critical(params);
    } else if (params.rho < 1.0) {
        out.estimate = asymp_subcritical(params);
    } else {
        out.estimate = asymp_supercritical(params);
    }
    return out;
}

} // namespace psq
