#include "psq/transform.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "psq/errors.hpp"
#include "psq/green.hpp"
#include "psq/scaled.hpp"
#include "psq/tridiag.hpp"

namespace psq {

std::vector<double> TransformVector::values_real() const {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i].real();
    return out;
}

TransformVector resolvent_solve(const ModelParams& params, Complex theta) {
    const GeneratorMatrix a = generator_matrix(params);
    const int k = params.capacity;

    std::vector<Complex> sub(a.sub.begin(), a.sub.end());
    std::vector<Complex> diag(k), sup(a.sup.begin(), a.sup.end());
    for (auto& s : sub) s = -s;
    for (auto& s : sup) s = -s;
    for (int n = 0; n < k; ++n) diag[n] = theta - a.diag[n];

    std::vector<Complex> rhs(k);
    for (int n = 0; n < k; ++n) rhs[n] = 1.0 / static_cast<double>(n + 1);

    // A pivot collapsing below 1e-13 flags theta at (or numerically at) a
    // pole of the resolvent; SingularSystem propagates to the caller.
    std::vector<Complex> phat = tridiag_solve<Complex>(sub, diag, sup, rhs, 1e-13);
    return {theta, std::move(phat), TransformMethod::resolvent};
}

TransformVector transform_theorem21(const ModelParams& params, double theta) {
    const int k = params.capacity;
    const double rho = params.rho;
    const RootData rd = root_data(params, Complex(theta, 0.0));

    const double alpha = rd.alpha.real();
    if (std::abs(alpha - std::round(alpha)) < 1e-6) {
        std::ostringstream os;
        os << "alpha = " << alpha << " is within 1e-6 of an integer; "
           << "the fundamental pair degenerates there";
        throw DegenerateAlpha(os.str());
    }

    const std::vector<Scaled> h = h_contour_many(rd, k - 1);
    const std::vector<Scaled> g = g_integral_many(rd, k - 1);
    const Scaled dh = delta_h(rd, k);
    const Scaled dg = delta_g(rd, k);

    // A vanishing boundary determinant is a pole of the transform; this
    // assembly amplifies quadrature noise once DeltaH drops many orders
    // below the scale of its own integrand.
    if (dh.is_zero() || dh.log_abs() < h[static_cast<std::size_t>(k - 1)].log_abs() + std::log(1e-9)) {
        std::ostringstream os;
        os << "boundary determinant nearly vanishes at theta = " << theta
           << " (pole of the transform)";
        throw NearPole(os.str());
    }

    const double log_rho = std::log(rho);

    // Prefix sums over the growing solution, suffix sums over the decaying
    // one: S_h[n] = sum_{l<=n} rho^l H_l, S_g[n] = sum_{l>n} rho^l G_l.
    std::vector<Scaled> s_h(static_cast<std::size_t>(k));
    Scaled acc;
    for (int l = 0; l < k; ++l) {
        acc += scaled_exp(l * log_rho) * h[static_cast<std::size_t>(l)];
        s_h[static_cast<std::size_t>(l)] = acc;
    }
    std::vector<Scaled> s_g(static_cast<std::size_t>(k)); // entry n holds sum over l > n
    Scaled tail;
    for (int n = k - 1; n >= 0; --n) {
        s_g[static_cast<std::size_t>(n)] = tail;
        tail += scaled_exp(n * log_rho) * g[static_cast<std::size_t>(n)];
    }

    // log M = log z_minus + alpha log(z_plus/z_minus), all real here.
    const double zm = rd.z_minus.real();
    const double zp = rd.z_plus.real();
    const Scaled m_scaled = scaled_exp(std::log(zm) + alpha * std::log(zp / zm));
    const Scaled coef = dg / dh;

    std::vector<Complex> values(static_cast<std::size_t>(k));
    for (int n = 0; n + 1 < k; ++n) {
        const auto un = static_cast<std::size_t>(n);
        const Scaled pn =
            m_scaled * (g[un] * s_h[un] + h[un] * s_g[un] - coef * h[un] * s_h[static_cast<std::size_t>(k - 1)]);
        values[un] = Complex(pn.to_double(), 0.0);
    }
    const Scaled last = s_h[static_cast<std::size_t>(k - 1)] /
                        (scaled_exp(k * log_rho) * dh * static_cast<double>(k));
    values[static_cast<std::size_t>(k - 1)] = Complex(last.to_double(), 0.0);

    return {Complex(theta, 0.0), std::move(values), TransformMethod::theorem21};
}

std::vector<double> conditional_moments(const ModelParams& params, int order) {
    if (order != 1 && order != 2) {
        throw DomainError("conditional moments are available for orders 1 and 2");
    }
    const GeneratorMatrix a = generator_matrix(params);
    const int k = params.capacity;

    std::vector<double> sub(a.sub.begin(), a.sub.end());
    std::vector<double> diag(a.diag.begin(), a.diag.end());
    std::vector<double> sup(a.sup.begin(), a.sup.end());
    for (auto& s : sub) s = -s;
    for (auto& s : sup) s = -s;
    for (auto& d : diag) d = -d;

    // (-A) m1 = 1
    std::vector<double> rhs(static_cast<std::size_t>(k), 1.0);
    std::vector<double> m1 = tridiag_solve<double>(sub, diag, sup, rhs, 1e-250);
    if (order == 1) return m1;

    // (-A) m2 = 2 m1
    std::vector<double> rhs2(m1);
    for (auto& x : rhs2) x *= 2.0;
    return tridiag_solve<double>(sub, diag, sup, rhs2, 1e-250);
}

} // namespace psq
