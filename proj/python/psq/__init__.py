"""Finite-capacity processor-sharing sojourn-time analysis.

Thin re-export of the compiled core: exact sojourn transform, pole sets,
relaxation-rate asymptotics, time-domain densities, and a Monte Carlo
simulator for the M/M/1-K processor-sharing queue.
"""

from ._core import (
    AiryValue,
    AsymptoticEstimate,
    Error,
    ModelParams,
    Regime,
    RootData,
    SojournSamples,
    Spectrum,
    SpectrumMethod,
    TailFit,
    ThetaSResult,
    TimeGridSolution,
    TimeMethod,
    TimeQuantity,
    TransformMethod,
    TransformVector,
    airy,
    airy_max_root,
    airy_prime_max_root,
    asymp_critical,
    asymp_subcritical,
    asymp_supercritical,
    coalescence_theta,
    conditional_moments,
    default_time_grid,
    delta_h_roots,
    eigen_spectrum,
    eigen_theta_s,
    gamma_fn,
    invert_transform,
    lower_coalescence_theta,
    ode_evolve,
    resolvent_solve,
    root_data,
    simulate_conditional,
    simulate_stationary,
    solve_r1,
    spectral_expand,
    tail_fit,
    theta_s_auto,
    theta_s_via_delta_h,
    transform_theorem21,
)

__all__ = [
    "AiryValue",
    "AsymptoticEstimate",
    "Error",
    "ModelParams",
    "Regime",
    "RootData",
    "SojournSamples",
    "Spectrum",
    "SpectrumMethod",
    "TailFit",
    "ThetaSResult",
    "TimeGridSolution",
    "TimeMethod",
    "TimeQuantity",
    "TransformMethod",
    "TransformVector",
    "airy",
    "airy_max_root",
    "airy_prime_max_root",
    "asymp_critical",
    "asymp_subcritical",
    "asymp_supercritical",
    "coalescence_theta",
    "conditional_moments",
    "default_time_grid",
    "delta_h_roots",
    "eigen_spectrum",
    "eigen_theta_s",
    "gamma_fn",
    "invert_transform",
    "lower_coalescence_theta",
    "ode_evolve",
    "resolvent_solve",
    "root_data",
    "simulate_conditional",
    "simulate_stationary",
    "solve_r1",
    "spectral_expand",
    "tail_fit",
    "theta_s_auto",
    "theta_s_via_delta_h",
    "transform_theorem21",
]

__version__ = "1.0.0"
