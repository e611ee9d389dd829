#ifndef PSQ_QUADRATURE_HPP
#define PSQ_QUADRATURE_HPP

#include <cmath>
#include <functional>

namespace psq {

// Integrate f over (0,1) with a tanh-sinh (double-exponential) rule.
// The substitution x = 1/(1 + exp(-pi*sinh(t))) pushes the endpoints to
// t = -/+inf at double-exponential speed, so endpoint algebraic behaviour
// (x^c or (1-x)^c, c > -1) costs no accuracy.  Abscissae near 0 are produced
// directly as small numbers, never as 1 - (something), so integrands may
// resolve endpoint distances down to denormals.
//
// Levels halve the step until two successive levels agree to rel_tol
// (with abs_floor as an absolute fallback scale).  Returns the integral;
// sets *converged if requested.
double tanh_sinh_01(const std::function<double(double)>& f,
                    double rel_tol,
                    double abs_floor = 0.0,
                    bool* converged = nullptr);

} // namespace psq

#endif // PSQ_QUADRATURE_HPP
