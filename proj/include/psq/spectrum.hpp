#ifndef PSQ_SPECTRUM_HPP
#define PSQ_SPECTRUM_HPP

#include <vector>

#include "psq/model.hpp"
#include "psq/tridiag.hpp"

namespace psq {

enum class SpectrumMethod { eigen, deltaH };

// Pole set of the sojourn transform = spectrum of the generator A.
// theta_s (the largest pole) is the relaxation rate: the sojourn density
// decays like exp(theta_s t).
struct Spectrum {
    std::vector<double> eigenvalues; // ascending
    double theta_s;
    SpectrumMethod method;
};

enum class Regime { sub, critical, super };

// One asymptotic large-K estimate of theta_s, with its additive terms kept
// separate so tables can show the term-by-term breakdown.
struct AsymptoticEstimate {
    Regime regime;
    double eta; // (rho - 1) K^(2/3)
    std::vector<double> terms;
    double theta_s_estimate;
};

// Similarity transform making A symmetric: log d_n with
// d_n = rho^(n/2) sqrt(n+1), so that D A D^{-1} is the symmetric tridiagonal
// returned by symmetrized_generator (off-diagonals sqrt(rho (n+1)/(n+2))).
std::vector<double> similarity_log_scale(const ModelParams& params);
SymTridiag symmetrized_generator(const ModelParams& params);

// All K eigenvalues of A via Sturm bisection on the symmetrized matrix.
Spectrum eigen_spectrum(const ModelParams& params);

// Largest eigenvalue only.
double eigen_theta_s(const ModelParams& params);

// theta_s as the largest real zero of DeltaH_K(theta), located by scanning
// downward from just below zero and bisecting the first sign change.  The
// scan steps min(0.25/K, distance-to-coalescence/10) and hops across the
// coalescence points where the root representation switches.
double theta_s_via_deltaH(const ModelParams& params);

// All DeltaH_K zeros in [theta_min, 0), ascending.
std::vector<double> delta_h_roots(const ModelParams& params, double theta_min);

// Large-K expansions of theta_s.
//   sub      (rho < 1):  -(1-sqrt(rho))^2 - sqrt(rho)/K + sqrt(rho) r0 K^(-4/3)
//                        - (8/15) sqrt(rho) r0^2 K^(-5/3),  r0 the largest Ai zero
//   critical (|eta|<=window): -1/K + r1 K^(-4/3)
//                        - [16 r1^3 + 8 eta^2 r1^2 + (eta^4 + 19 eta) r1
//                           + eta^3 + 9] / (30 r1) K^(-5/3)
//   super    (rho > 1):  -1/K - 1/((rho-1) K^2) - 1/((rho-1)^2 K^3)
//                        + (rho^2+1)/((rho-1)^4 K^4)
AsymptoticEstimate asymp_subcritical(const ModelParams& params);
AsymptoticEstimate asymp_critical(const ModelParams& params, double eta_window = 3.0);
AsymptoticEstimate asymp_supercritical(const ModelParams& params);

// Exact theta_s (eigensolver) plus the regime-dispatched estimate.
struct ThetaSResult {
    double exact;
    AsymptoticEstimate estimate;
};
ThetaSResult theta_s_auto(const ModelParams& params);

} // namespace psq

#endif // PSQ_SPECTRUM_HPP
