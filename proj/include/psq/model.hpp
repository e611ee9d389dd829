#ifndef PSQ_MODEL_HPP
#define PSQ_MODEL_HPP

#include <complex>
#include <utility>
#include <vector>

namespace psq {

using Complex = std::complex<double>;

// Finite-capacity processor-sharing queue with unit service rate.
// rho is the offered load (arrival rate / service rate) and capacity is the
// maximum number of customers admitted simultaneously.
struct ModelParams {
    double rho;
    int capacity;

    ModelParams(double rho_, int capacity_);
};

// Data derived from the characteristic quadratic
//   rho z^2 - (1 + rho + theta) z + 1 = 0
// evaluated at a transform argument theta.  alpha = z_plus/(z_plus - z_minus)
// and m_factor = z_minus (z_plus/z_minus)^alpha are the normalisation
// constants of the two fundamental recurrence solutions.
struct RootData {
    Complex theta;
    Complex z_minus;
    Complex z_plus;
    Complex alpha;
    Complex m_factor;
};

// Tridiagonal generator of the conditional sojourn density system
// p' = A p, stored as three bands:
//   sub[i]  = A[i+1][i]   = (i+1)/(i+2),          i = 0 .. K-2
//   diag[n] = A[n][n]     = -(1+rho), last row -1
//   sup[i]  = A[i][i+1]   = rho,                  i = 0 .. K-2
// The last diagonal entry folds the reflecting boundary p_{K-1} = p_K into
// the row, which is what makes it -1 instead of -(1+rho).
struct GeneratorMatrix {
    int capacity;
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;

    // y = A x
    std::vector<double> apply(const std::vector<double>& x) const;
    // max_n sum_m |A[n][m]|
    double inf_norm() const;
};

// Roots of the characteristic quadratic, returned as (z_minus, z_plus).
// For real theta above the upper coalescence point both roots are real with
// z_plus > z_minus; for real theta inside the band they form a conjugate
// pair and z_plus is the one with positive imaginary part.
std::pair<Complex, Complex> characteristic_roots(const ModelParams& params, Complex theta);

// Assemble RootData; throws CoalescentRoots when the two roots are closer
// than coalescence_tol * (1 + |z_plus|).
RootData root_data(const ModelParams& params, Complex theta, double coalescence_tol = 1e-10);

// theta at which the roots coalesce on the high side: -(1 - sqrt(rho))^2.
double coalescence_theta(const ModelParams& params);

// theta at which they coalesce on the low side: -(1 + sqrt(rho))^2.
double lower_coalescence_theta(const ModelParams& params);

GeneratorMatrix generator_matrix(const ModelParams& params);

} // namespace psq

#endif // PSQ_MODEL_HPP
