#include "psq/model.hpp"

#include <cmath>
#include <sstream>

#include "psq/errors.hpp"

namespace psq {

ModelParams::ModelParams(double rho_, int capacity_) : rho(rho_), capacity(capacity_) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        std::ostringstream os;
        os << "offered load must be positive and finite, got " << rho;
        throw DomainError(os.str());
    }
    if (capacity < 1) {
        std::ostringstream os;
        os << "capacity must be at least 1, got " << capacity;
        throw DomainError(os.str());
    }
}

double coalescence_theta(const ModelParams& params) {
    const double s = std::sqrt(params.rho);
    return -(1.0 - s) * (1.0 - s);
}

double lower_coalescence_theta(const ModelParams& params) {
    const double s = std::sqrt(params.rho);
    return -(1.0 + s) * (1.0 + s);
}

std::pair<Complex, Complex> characteristic_roots(const ModelParams& params, Complex theta) {
    const double rho = params.rho;
    const Complex b = 1.0 + rho + theta;
    const Complex disc = b * b - 4.0 * rho;
    const Complex sq = std::sqrt(disc);

    // Evaluate the numerically larger root directly and recover the other
    // from the product z_plus z_minus = 1/rho to avoid cancellation.
    const Complex q = (std::abs(b + sq) >= std::abs(b - sq)) ? (b + sq) : (b - sq);
    Complex za, zb;
    if (std::abs(q) > 0.0) {
        za = q / (2.0 * rho);
        zb = 2.0 / q;
    } else { // exactly coalescent
        za = zb = b / (2.0 * rho);
    }

    // Label: conjugate pair -> positive imaginary part is z_plus;
    // otherwise the larger real part wins.
    bool a_is_plus;
    if (std::abs(za.imag() - zb.imag()) > 1e-14 * (1.0 + std::abs(za))) {
        a_is_plus = za.imag() > zb.imag();
    } else {
        a_is_plus = za.real() >= zb.real();
    }
    return a_is_plus ? std::make_pair(zb, za) : std::make_pair(za, zb);
}

RootData root_data(const ModelParams& params, Complex theta, double coalescence_tol) {
    auto [zm, zp] = characteristic_roots(params, theta);
    const Complex gap = zp - zm;
    if (std::abs(gap) < coalescence_tol * (1.0 + std::abs(zp))) {
        std::ostringstream os;
        os << "characteristic roots coalesce near theta = " << theta.real()
           << " (|z_plus - z_minus| = " << std::abs(gap) << ")";
        throw CoalescentRoots(os.str());
    }
    RootData rd;
    rd.theta = theta;
    rd.z_minus = zm;
    rd.z_plus = zp;
    rd.alpha = zp / gap;
    rd.m_factor = zm * std::pow(zp / zm, rd.alpha);
    return rd;
}

GeneratorMatrix generator_matrix(const ModelParams& params) {
    const int k = params.capacity;
    GeneratorMatrix a;
    a.capacity = k;
    a.sub.resize(k > 0 ? k - 1 : 0);
    a.diag.resize(k);
    a.sup.resize(k > 0 ? k - 1 : 0);
    for (int i = 0; i + 1 < k; ++i) {
        a.sub[i] = static_cast<double>(i + 1) / static_cast<double>(i + 2);
        a.sup[i] = params.rho;
    }
    for (int n = 0; n < k; ++n) a.diag[n] = -(1.0 + params.rho);
    // reflecting boundary folds rho p_K = rho p_{K-1} into the last row
    a.diag[k - 1] = -1.0;
    return a;
}

std::vector<double> GeneratorMatrix::apply(const std::vector<double>& x) const {
    const int k = capacity;
    std::vector<double> y(k);
    for (int n = 0; n < k; ++n) {
        double v = diag[n] * x[n];
        if (n > 0) v += sub[n - 1] * x[n - 1];
        if (n + 1 < k) v += sup[n] * x[n + 1];
        y[n] = v;
    }
    return y;
}

double GeneratorMatrix::inf_norm() const {
    double best = 0.0;
    for (int n = 0; n < capacity; ++n) {
        double s = std::fabs(diag[n]);
        if (n > 0) s += std::fabs(sub[n - 1]);
        if (n + 1 < capacity) s += std::fabs(sup[n]);
        best = std::max(best, s);
    }
    return best;
}

} // namespace psq
