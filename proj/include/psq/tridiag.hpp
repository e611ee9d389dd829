#ifndef PSQ_TRIDIAG_HPP
#define PSQ_TRIDIAG_HPP

#include <complex>
#include <vector>

namespace psq {

// Symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off;

    int size() const { return static_cast<int>(diag.size()); }
};

// Number of eigenvalues strictly below x (Sturm sequence count).
int sturm_count_below(const SymTridiag& t, double x);

// All eigenvalues, ascending, each located by bisection to abs_tol.
std::vector<double> sturm_eigenvalues(const SymTridiag& t, double abs_tol = 1e-13);

// Only the largest eigenvalue (cheap even for very large matrices).
double sturm_largest_eigenvalue(const SymTridiag& t, double abs_tol = 1e-13);

// Unit eigenvector for an eigenvalue already located to high accuracy,
// via inverse iteration with a pivoted tridiagonal solve.
std::vector<double> inverse_iteration_vector(const SymTridiag& t, double lambda);

// Solve a general (non-symmetric) tridiagonal system M x = rhs with partial
// pivoting.  sub/diag/sup are the bands of M; throws SingularSystem on a
// negligible pivot.  Shared by the resolvent and the inverse iteration.
template <typename T>
std::vector<T> tridiag_solve(std::vector<T> sub, std::vector<T> diag, std::vector<T> sup,
                             std::vector<T> rhs, double pivot_floor);

} // namespace psq

#endif // PSQ_TRIDIAG_HPP
