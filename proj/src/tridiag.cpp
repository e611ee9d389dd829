#include "psq/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "psq/errors.hpp"

namespace psq {

namespace {

double sturm_pivmin(const SymTridiag& t) {
    double max_off2 = 1.0;
    for (double b : t.off) max_off2 = std::max(max_off2, b * b);
    return std::numeric_limits<double>::min() * max_off2;
}

// Gershgorin interval enclosing the whole spectrum.
std::pair<double, double> gershgorin_bounds(const SymTridiag& t) {
    const int n = t.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(t.off[i - 1]);
        if (i + 1 < n) r += std::abs(t.off[i]);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    // widen slightly so the counts at the endpoints are 0 and n
    const double pad = 1e-12 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
    return {lo - pad, hi + pad};
}

int count_below(const SymTridiag& t, double x, double pivmin) {
    const int n = t.size();
    int count = 0;
    double d = t.diag[0] - x;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
        d = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / d;
        if (std::abs(d) < pivmin) d = -pivmin;
        if (d < 0.0) ++count;
    }
    return count;
}

// Bisect for the eigenvalue of the given ascending index inside [lo, hi].
double bisect_index(const SymTridiag& t, int index, double lo, double hi, double abs_tol,
                    double pivmin) {
    while (hi - lo > abs_tol + 8.0 * std::numeric_limits<double>::epsilon() *
                                       std::max(std::abs(lo), std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // interval at rounding resolution
        if (count_below(t, mid, pivmin) <= index)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

int sturm_count_below(const SymTridiag& t, double x) {
    return count_below(t, x, sturm_pivmin(t));
}

std::vector<double> sturm_eigenvalues(const SymTridiag& t, double abs_tol) {
    const int n = t.size();
    const double pivmin = sturm_pivmin(t);
    auto [lo, hi] = gershgorin_bounds(t);
    std::vector<double> eig(n);
    for (int j = 0; j < n; ++j) eig[j] = bisect_index(t, j, lo, hi, abs_tol, pivmin);
    return eig;
}

double sturm_largest_eigenvalue(const SymTridiag& t, double abs_tol) {
    const double pivmin = sturm_pivmin(t);
    auto [lo, hi] = gershgorin_bounds(t);
    return bisect_index(t, t.size() - 1, lo, hi, abs_tol, pivmin);
}

std::vector<double> inverse_iteration_vector(const SymTridiag& t, double lambda) {
    const int n = t.size();
    const double pivot_floor = 1e-3 * sturm_pivmin(t) + std::numeric_limits<double>::min();

    // Matrix norm scale used for the residual check and for perturbing a
    // shift that lands exactly on the eigenvalue.
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = std::abs(t.diag[i]);
        if (i > 0) s += std::abs(t.off[i - 1]);
        if (i + 1 < n) s += std::abs(t.off[i]);
        scale = std::max(scale, s);
    }
    if (scale == 0.0) scale = 1.0;

    double shift = lambda;
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<double> sub(std::max(n - 1, 0)), diag(n), sup(std::max(n - 1, 0));
        for (int i = 0; i + 1 < n; ++i) sub[i] = sup[i] = t.off[i];
        for (int i = 0; i < n; ++i) diag[i] = t.diag[i] - shift;

        // Mildly irregular start vector so it is not orthogonal to the target.
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.37 * std::sin(2.1 * i + 0.4);

        bool ok = true;
        for (int iter = 0; iter < 4 && ok; ++iter) {
            try {
                v = tridiag_solve<double>(sub, diag, sup, v, pivot_floor);
            } catch (const SingularSystem&) {
                ok = false;
                break;
            }
            double norm = 0.0;
            for (double x : v) norm += x * x;
            norm = std::sqrt(norm);
            if (!(norm > 0.0) || !std::isfinite(norm)) {
                ok = false;
                break;
            }
            for (double& x : v) x /= norm;
        }

        if (ok) {
            // Residual ||(T - lambda) v|| against the *requested* eigenvalue.
            double res = 0.0;
            for (int i = 0; i < n; ++i) {
                double y = (t.diag[i] - lambda) * v[i];
                if (i > 0) y += t.off[i - 1] * v[i - 1];
                if (i + 1 < n) y += t.off[i] * v[i + 1];
                res += y * y;
            }
            if (std::sqrt(res) <= 1e-8 * scale) {
                // Deterministic sign: largest-magnitude entry positive.
                int arg = 0;
                for (int i = 1; i < n; ++i)
                    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
                if (v[arg] < 0.0)
                    for (double& x : v) x = -x;
                return v;
            }
        }
        // Nudge the shift off the exact eigenvalue and retry.
        shift = lambda + scale * 1e-13 * static_cast<double>(attempt + 1);
    }
    std::ostringstream os;
    os << "inverse iteration failed to converge for eigenvalue " << lambda;
    throw ConvergenceError(os.str());
}

template <typename T>
std::vector<T> tridiag_solve(std::vector<T> sub, std::vector<T> diag, std::vector<T> sup,
                             std::vector<T> rhs, double pivot_floor) {
    using std::abs;
    const int n = static_cast<int>(diag.size());
    if (n == 0) return {};
    sup.resize(n, T{});               // sup[n-1] unused but keeps indexing uniform
    std::vector<T> fill(n, T{});      // second superdiagonal created by row swaps

    for (int i = 0; i + 1 < n; ++i) {
        // Partial pivoting: rows i and i+1 both span columns i .. i+2 here.
        if (abs(sub[i]) > abs(diag[i])) {
            std::swap(diag[i], sub[i]);
            std::swap(sup[i], diag[i + 1]);
            std::swap(fill[i], sup[i + 1]);
            std::swap(rhs[i], rhs[i + 1]);
        }
        if (abs(diag[i]) < pivot_floor) {
            std::ostringstream os;
            os << "negligible pivot at row " << i << " in tridiagonal solve";
            throw SingularSystem(os.str());
        }
        const T m = sub[i] / diag[i];
        diag[i + 1] -= m * sup[i];
        sup[i + 1] -= m * fill[i];
        rhs[i + 1] -= m * rhs[i];
    }
    if (abs(diag[n - 1]) < pivot_floor) {
        std::ostringstream os;
        os << "negligible pivot at row " << n - 1 << " in tridiagonal solve";
        throw SingularSystem(os.str());
    }

    std::vector<T> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    if (n >= 2) x[n - 2] = (rhs[n - 2] - sup[n - 2] * x[n - 1]) / diag[n - 2];
    for (int i = n - 3; i >= 0; --i)
        x[i] = (rhs[i] - sup[i] * x[i + 1] - fill[i] * x[i + 2]) / diag[i];
    return x;
}

template std::vector<double> tridiag_solve<double>(std::vector<double>, std::vector<double>,
                                                   std::vector<double>, std::vector<double>,
                                                   double);
template std::vector<std::complex<double>> tridiag_solve<std::complex<double>>(
    std::vector<std::complex<double>>, std::vector<std::complex<double>>,
    std::vector<std::complex<double>>, std::vector<std::complex<double>>, double);

} // namespace psq
