#ifndef PSQ_GREEN_HPP
#define PSQ_GREEN_HPP

#include <vector>

#include "psq/model.hpp"
#include "psq/scaled.hpp"

namespace psq {

// The two fundamental solutions of the homogeneous three-term recurrence
//   (n+1) rho X_{n+1} - (n+1)(1+rho+theta) X_n + n X_{n-1} = 0
// at one index n, in scaled storage (true value = *_value * exp(log_scale_*)).
// G_n decays like z_minus^n and H_n grows like z_plus^n.
struct GreenPair {
    int n;
    double g_value;
    double h_value;
    double log_scale_g;
    double log_scale_h;
};

// G_n = int_0^{z_minus} z^n (z_plus - z)^(-alpha) (z_minus - z)^(alpha-1) dz.
// Requires real theta strictly above the upper coalescence point (so that
// both roots are real and positive); accuracy <= 1e-9 relative for n <= 200.
Scaled g_integral(const RootData& rd, int n);

// H_n as a closed contour integral around the segment [z_minus, z_plus]:
//   H_n = (1/2 pi i) oint z^n (z - z_minus)^(-1) w(z)^alpha dz,
//   w(z) = (z - z_minus)/(z - z_plus),
// with the principal branch of w^alpha, which is single-valued off the
// segment.  Valid for real theta on both sides of coalescence (real roots
// or a conjugate pair); the result is real and returned scaled.  Where the
// contour's dynamic range exceeds double precision (very near coalescence),
// evaluation switches to exact algebraic forms of the same quantity.
Scaled h_contour(const RootData& rd, int n);

// Same quantity forced through the contour with the default ellipse margin
// multiplied by margin_scale in (0, 1].  By analyticity the value does not
// depend on the ellipse chosen; exposed so that independence can be verified.
Scaled h_contour_scaled_margin(const RootData& rd, int n, double margin_scale);

// Delta H_K = H_K - H_{K-1}, evaluated as a single contour integral of
// z^(K-1) (z - 1) (z - z_minus)^(-1) w^alpha to avoid cancellation.  Its
// real zeros in theta are the poles of the sojourn transform.
Scaled delta_h(const RootData& rd, int capacity);

// Delta G_K = G_K - G_{K-1} as a single real integral (same anticancellation
// trick on the G side).
Scaled delta_g(const RootData& rd, int capacity);

// Delta H_K evaluated through the defining three-term recurrence in scaled
// arithmetic.  Delta H_K is a degree-K polynomial in theta, so this form is
// entire: it needs no root representation and passes smoothly through both
// coalescence points, which makes it the right evaluator for sign scans.
// Accuracy is relative to the recurrence solution's envelope, which is the
// best any fixed-precision evaluation can do between the coalescence points.
Scaled delta_h_recurrence(const ModelParams& params, double theta);

// Batch evaluations sharing one quadrature: all orders 0..n_max.
std::vector<Scaled> g_integral_many(const RootData& rd, int n_max);
std::vector<Scaled> h_contour_many(const RootData& rd, int n_max);

// Relative residual of the discrete Wronskian identity
//   G_l H_{l+1} - G_{l+1} H_l = 1 / (rho M (l+1) rho^l).
double wronskian_check(const RootData& rd, int l);

GreenPair green_pair(const RootData& rd, int n);

} // namespace psq

#endif // PSQ_GREEN_HPP
