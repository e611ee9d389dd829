#ifndef PSQ_TIME_DOMAIN_HPP
#define PSQ_TIME_DOMAIN_HPP

#include <vector>

#include "psq/model.hpp"

namespace psq {

enum class TimeQuantity { density, survival };
enum class TimeMethod { ode, spectral, inversion };

// Conditional sojourn density p_n(t) and/or survival q_n(t) on a time grid.
// Row j corresponds to t_grid[j]; column n to the initial occupancy.
// Whichever of density/survival was not computed is left empty.
struct TimeGridSolution {
    ModelParams params;
    std::vector<double> t_grid;
    std::vector<std::vector<double>> density;
    std::vector<std::vector<double>> survival;
    TimeMethod method;
};

// Integrate p' = A p (density, p_n(0) = 1/(n+1)) or q' = A q (survival,
// q_n(0) = 1; the survival vector satisfies the same system because
// integrating the density system from t to infinity commutes with A).
// Classical fourth-order stepping, step capped at 0.1/||A||_inf, local
// error target 1e-10 via step doubling.
TimeGridSolution ode_evolve(const ModelParams& params, const std::vector<double>& t_grid,
                            TimeQuantity quantity);

// Eigen-expansion of the same solution: both density and survival filled.
// Uses the symmetrizing similarity; throws IllConditioned if the basis
// condition estimate exp(max log d - min log d) exceeds 1e10.
TimeGridSolution spectral_expand(const ModelParams& params, const std::vector<double>& t_grid);

// Density p_n(t) by numerical transform inversion on a fixed deformed
// contour (cotangent family, 32 nodes), one value per grid time (t > 0).
// Target 1e-8 relative for t in [0.1, 50].
std::vector<double> invert_transform(const ModelParams& params, int n,
                                     const std::vector<double>& t_grid);

// Least-squares line through log q_n(t) on [t1, t2]; slope estimates the
// relaxation rate theta_s.  Throws WindowTooEarly when the second mode is
// estimated to bias the slope by more than 1%.
struct TailFit {
    double slope;
    double intercept;
};
TailFit tail_fit(const TimeGridSolution& solution, double t1, double t2, int n = 0);

// Geometric grid 1e-2 .. 10/|theta_s| with 200 points, prefixed with t = 0.
std::vector<double> default_time_grid(const ModelParams& params);

} // namespace psq

#endif // PSQ_TIME_DOMAIN_HPP
