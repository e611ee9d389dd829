#include "psq/time_domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "psq/errors.hpp"
#include "psq/spectrum.hpp"
#include "psq/transform.hpp"
#include "psq/tridiag.hpp"

namespace psq {

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> rk4_step(const GeneratorMatrix& a, const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    const std::vector<double> k1 = a.apply(y);
    std::vector<double> tmp(n);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const std::vector<double> k2 = a.apply(tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const std::vector<double> k3 = a.apply(tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    const std::vector<double> k4 = a.apply(tmp);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

void validate_grid(const std::vector<double>& t_grid, bool positive_only) {
    if (t_grid.empty()) throw DomainError("empty time grid");
    double prev = -1.0;
    for (double t : t_grid) {
        if (!std::isfinite(t) || t < 0.0 || (positive_only && t == 0.0)) {
            std::ostringstream os;
            os << "invalid grid time " << t;
            throw DomainError(os.str());
        }
        if (t <= prev) throw DomainError("time grid must be strictly ascending");
        prev = t;
    }
}

} // namespace

TimeGridSolution ode_evolve(const ModelParams& params, const std::vector<double>& t_grid,
                            TimeQuantity quantity) {
    validate_grid(t_grid, false);
    const GeneratorMatrix a = generator_matrix(params);
    const int k = params.capacity;

    std::vector<double> y(static_cast<std::size_t>(k));
    for (int n = 0; n < k; ++n)
        y[static_cast<std::size_t>(n)] =
            quantity == TimeQuantity::density ? 1.0 / (n + 1.0) : 1.0;

    const double h_max = 0.1 / a.inf_norm();
    double h = h_max;
    double t_cur = 0.0;

    TimeGridSolution sol{params, t_grid, {}, {}, TimeMethod::ode};
    auto& rows = quantity == TimeQuantity::density ? sol.density : sol.survival;
    rows.reserve(t_grid.size());

    for (double target : t_grid) {
        while (t_cur < target) {
            const double h_try = std::min({h, h_max, target - t_cur});
            const std::vector<double> full = rk4_step(a, y, h_try);
            std::vector<double> half = rk4_step(a, y, 0.5 * h_try);
            half = rk4_step(a, half, 0.5 * h_try);

            double err = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i)
                err = std::max(err, std::abs(full[i] - half[i]));
            err /= 15.0;
            const double tol = 1e-10 * std::max(1.0, inf_norm(y));

            if (err <= tol) {
                // accept with local extrapolation to fifth order
                for (std::size_t i = 0; i < y.size(); ++i)
                    y[i] = half[i] + (half[i] - full[i]) / 15.0;
                t_cur += h_try;
            }
            const double grow =
                0.9 * std::pow(tol / std::max(err, 1e-300), 0.2);
            h = h_try * std::clamp(grow, 0.2, 5.0);
            if (h < 1e-12) {
                std::ostringstream os;
                os << "step size underflow at t = " << t_cur;
                throw StepUnderflow(os.str());
            }
        }
        rows.push_back(y);
    }
    return sol;
}

TimeGridSolution spectral_expand(const ModelParams& params, const std::vector<double>& t_grid) {
    validate_grid(t_grid, false);
    const int k = params.capacity;
    if (k > 2000) {
        throw IllConditioned("spectral expansion limited to capacity <= 2000");
    }
    const std::vector<double> logd = similarity_log_scale(params);
    const auto [mn, mx] = std::minmax_element(logd.begin(), logd.end());
    if (*mx - *mn > std::log(1e10)) {
        std::ostringstream os;
        os << "similarity transform condition exp(" << *mx - *mn
           << ") exceeds 1e10; use the ODE path";
        throw IllConditioned(os.str());
    }

    const SymTridiag t = symmetrized_generator(params);
    const std::vector<double> eig = sturm_eigenvalues(t);

    // Columns of V are unit eigenvectors of the symmetric matrix; the
    // original-basis modes are D^{-1} v_j with expansion weights
    // c_j = v_j . (D p(0)).
    std::vector<std::vector<double>> vecs(eig.size());
    std::vector<double> coef(eig.size());
    for (std::size_t j = 0; j < eig.size(); ++j) {
        vecs[j] = inverse_iteration_vector(t, eig[j]);
        double c = 0.0;
        for (int m = 0; m < k; ++m)
            c += vecs[j][static_cast<std::size_t>(m)] *
                 std::exp(logd[static_cast<std::size_t>(m)]) / (m + 1.0);
        coef[j] = c;
    }

    TimeGridSolution sol{params, t_grid, {}, {}, TimeMethod::spectral};
    sol.density.reserve(t_grid.size());
    sol.survival.reserve(t_grid.size());
    for (double tt : t_grid) {
        std::vector<double> p(static_cast<std::size_t>(k), 0.0);
        std::vector<double> q(static_cast<std::size_t>(k), 0.0);
        for (std::size_t j = 0; j < eig.size(); ++j) {
            const double e = std::exp(eig[j] * tt) * coef[j];
            const double es = e / (-eig[j]);
            for (int n = 0; n < k; ++n) {
                const double u = vecs[j][static_cast<std::size_t>(n)] *
                                 std::exp(-logd[static_cast<std::size_t>(n)]);
                p[static_cast<std::size_t>(n)] += e * u;
                q[static_cast<std::size_t>(n)] += es * u;
            }
        }
        sol.density.push_back(std::move(p));
        sol.survival.push_back(std::move(q));
    }
    return sol;
}

std::vector<double> invert_transform(const ModelParams& params, int n,
                                     const std::vector<double>& t_grid) {
    validate_grid(t_grid, true);
    if (n < 0 || n >= params.capacity) {
        throw DomainError("initial occupancy outside 0 .. K-1");
    }

    constexpr int m_nodes = 32;
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        // The contour crosses the real axis only at +r and its other nodes
        // keep imaginary part >= r*pi/m = 2*pi/(5t), which is their minimum
        // distance to the (negative real) pole set.
        if (2.0 * M_PI / (5.0 * t) < 1e-6) {
            std::ostringstream os;
            os << "inversion contour nodes come within 1e-6 of the pole axis for t = " << t;
            throw ContourCollision(os.str());
        }
        const double r = 2.0 * m_nodes / (5.0 * t);

        // phi = 0 node: s = r on the real axis, weight 1/2.
        double sum = 0.5 * std::exp(r * t) *
                     resolvent_solve(params, Complex(r, 0.0))
                         .values[static_cast<std::size_t>(n)]
                         .real();
        for (int j = 1; j < m_nodes; ++j) {
            const double phi = j * M_PI / m_nodes;
            const double cot = std::cos(phi) / std::sin(phi);
            const Complex s(r * phi * cot, r * phi);
            const Complex fs =
                resolvent_solve(params, s).values[static_cast<std::size_t>(n)];
            const Complex x = std::exp(s * t) * fs;
            const double csc2 = 1.0 / (std::sin(phi) * std::sin(phi));
            sum += x.real() + (cot - phi * csc2) * x.imag();
        }
        out.push_back(sum * r / m_nodes);
    }
    return out;
}

TailFit tail_fit(const TimeGridSolution& solution, double t1, double t2, int n) {
    if (solution.survival.empty()) {
        throw DomainError("tail fit needs survival values; none in this solution");
    }
    if (n < 0 || n >= solution.params.capacity) {
        throw DomainError("initial occupancy outside 0 .. K-1");
    }
    if (!(t1 < t2)) throw DomainError("tail window must satisfy t1 < t2");

    // Bias estimate: the second spectral mode decays a factor
    // exp((theta_2 - theta_s) t) below the first; if its estimated relative
    // weight at the window midpoint would move the slope by more than 1%,
    // the window starts too early to read off the relaxation rate.
    if (solution.params.capacity >= 2) {
        const std::vector<double> eig =
            sturm_eigenvalues(symmetrized_generator(solution.params));
        const double ts = eig[eig.size() - 1];
        const double t2nd = eig[eig.size() - 2];
        const double t_mid = 0.5 * (t1 + t2);
        const double bias =
            std::abs(t2nd - ts) / std::abs(ts) * std::exp((t2nd - ts) * t_mid);
        if (bias > 0.01) {
            std::ostringstream os;
            os << "tail window starts too early: second-mode slope bias estimate " << bias
               << " exceeds 0.01";
            throw WindowTooEarly(os.str());
        }
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (std::size_t j = 0; j < solution.t_grid.size(); ++j) {
        const double t = solution.t_grid[j];
        if (t < t1 || t > t2) continue;
        const double q = solution.survival[j][static_cast<std::size_t>(n)];
        if (!(q > 0.0)) continue;
        const double y = std::log(q);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++count;
    }
    if (count < 2) throw DomainError("fewer than two usable grid points in the tail window");

    const double denom = count * sxx - sx * sx;
    TailFit fit;
    fit.slope = (count * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / count;
    return fit;
}

std::vector<double> default_time_grid(const ModelParams& params) {
    const double ts = eigen_theta_s(params);
    const double t_max = std::max(10.0 / std::abs(ts), 0.1);
    const double t_min = 1e-2;
    const int count = 200;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count) + 1);
    grid.push_back(0.0);
    for (int i = 0; i < count; ++i)
        grid.push_back(t_min * std::pow(t_max / t_min, static_cast<double>(i) / (count - 1)));
    return grid;
}

} // namespace psq
