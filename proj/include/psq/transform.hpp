#ifndef PSQ_TRANSFORM_HPP
#define PSQ_TRANSFORM_HPP

#include <complex>
#include <vector>

#include "psq/model.hpp"

namespace psq {

enum class TransformMethod { theorem21, resolvent };

// Laplace transform of the conditional sojourn density, one value per
// initial occupancy n = 0 .. K-1.
struct TransformVector {
    Complex theta;
    std::vector<Complex> values;
    TransformMethod method;

    // Real parts, for real theta (the values carry no imaginary component
    // on the real axis away from poles).
    std::vector<double> values_real() const;
};

// Direct tridiagonal solve of (theta I - A) phat = p(0), p_n(0) = 1/(n+1).
// Works for any complex theta away from the pole set; the independent
// cross-check for the Green's-function assembly below.
TransformVector resolvent_solve(const ModelParams& params, Complex theta);

// Green's-function assembly of the same transform for real theta above the
// upper coalescence point:
//   phat_n    = M G_n Sum_{l<=n} rho^l H_l + M H_n Sum_{l>n} rho^l G_l
//               - (DeltaG_K / DeltaH_K) M H_n Sum_l rho^l H_l     (n <= K-2)
//   phat_{K-1}= Sum_l rho^l H_l / (K rho^K DeltaH_K).
// Throws DegenerateAlpha when alpha is within 1e-6 of an integer (the
// resolvent is authoritative there) and NearPole when DeltaH_K is small
// enough that the assembly would amplify noise.
TransformVector transform_theorem21(const ModelParams& params, double theta);

// Conditional sojourn moments per initial occupancy: order 1 gives the
// means (-A) x = 1, order 2 the second moments (-A) x = 2 m1.
std::vector<double> conditional_moments(const ModelParams& params, int order);

} // namespace psq

#endif // PSQ_TRANSFORM_HPP
