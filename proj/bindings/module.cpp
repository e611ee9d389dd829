// Python bindings for the processor-sharing sojourn library.  The module
// mirrors the C++ surface one-to-one: model parameters, transform values,
// pole sets and asymptotics, time-domain solutions, and the Monte Carlo
// simulator.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psq/errors.hpp"
#include "psq/green.hpp"
#include "psq/model.hpp"
#include "psq/simulate.hpp"
#include "psq/special_functions.hpp"
#include "psq/spectrum.hpp"
#include "psq/time_domain.hpp"
#include "psq/transform.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite-capacity processor-sharing sojourn-time analysis";

    py::register_exception<psq::Error>(m, "Error");

    py::class_<psq::ModelParams>(m, "ModelParams")
        .def(py::init<double, int>(), py::arg("rho"), py::arg("capacity"))
        .def_readonly("rho", &psq::ModelParams::rho)
        .def_readonly("capacity", &psq::ModelParams::capacity)
        .def("__repr__", [](const psq::ModelParams& p) {
            return "ModelParams(rho=" + std::to_string(p.rho) +
                   ", capacity=" + std::to_string(p.capacity) + ")";
        });

    py::class_<psq::RootData>(m, "RootData")
        .def_readonly("theta", &psq::RootData::theta)
        .def_readonly("z_minus", &psq::RootData::z_minus)
        .def_readonly("z_plus", &psq::RootData::z_plus)
        .def_readonly("alpha", &psq::RootData::alpha)
        .def_readonly("m_factor", &psq::RootData::m_factor);

    m.def("root_data", &psq::root_data, py::arg("params"), py::arg("theta"),
          py::arg("coalescence_tol") = 1e-10,
          "Characteristic roots and transform constants at one theta");
    m.def("coalescence_theta", &psq::coalescence_theta,
          "Upper coalescence point -(1-sqrt(rho))^2");
    m.def("lower_coalescence_theta", &psq::lower_coalescence_theta,
          "Lower coalescence point -(1+sqrt(rho))^2");

    py::enum_<psq::TransformMethod>(m, "TransformMethod")
        .value("theorem21", psq::TransformMethod::theorem21)
        .value("resolvent", psq::TransformMethod::resolvent);

    py::class_<psq::TransformVector>(m, "TransformVector")
        .def_readonly("theta", &psq::TransformVector::theta)
        .def_readonly("values", &psq::TransformVector::values)
        .def_readonly("method", &psq::TransformVector::method)
        .def("values_real", &psq::TransformVector::values_real);

    m.def("resolvent_solve", &psq::resolvent_solve, py::arg("params"), py::arg("theta"),
          "Direct tridiagonal solve of (theta I - A) phat = p(0)");
    m.def("transform_theorem21", &psq::transform_theorem21, py::arg("params"),
          py::arg("theta"), "Green's-function assembly of the sojourn transform");
    m.def("conditional_moments", &psq::conditional_moments, py::arg("params"),
          py::arg("order"), "Sojourn moments E[V^order | N = n] for n = 0..K-1");

    py::enum_<psq::SpectrumMethod>(m, "SpectrumMethod")
        .value("eigen", psq::SpectrumMethod::eigen)
        .value("deltaH", psq::SpectrumMethod::deltaH);

    py::class_<psq::Spectrum>(m, "Spectrum")
        .def_readonly("eigenvalues", &psq::Spectrum::eigenvalues)
        .def_readonly("theta_s", &psq::Spectrum::theta_s)
        .def_readonly("method", &psq::Spectrum::method);

    py::enum_<psq::Regime>(m, "Regime")
        .value("sub", psq::Regime::sub)
        .value("critical", psq::Regime::critical)
        .value("super", psq::Regime::super);

    py::class_<psq::AsymptoticEstimate>(m, "AsymptoticEstimate")
        .def_readonly("regime", &psq::AsymptoticEstimate::regime)
        .def_readonly("eta", &psq::AsymptoticEstimate::eta)
        .def_readonly("terms", &psq::AsymptoticEstimate::terms)
        .def_readonly("theta_s_estimate", &psq::AsymptoticEstimate::theta_s_estimate);

    py::class_<psq::ThetaSResult>(m, "ThetaSResult")
        .def_readonly("exact", &psq::ThetaSResult::exact)
        .def_readonly("estimate", &psq::ThetaSResult::estimate);

    m.def("eigen_spectrum", &psq::eigen_spectrum, py::arg("params"),
          "All K generator eigenvalues (transform poles), ascending");
    m.def("eigen_theta_s", &psq::eigen_theta_s, py::arg("params"),
          "Largest eigenvalue = relaxation rate");
    m.def("theta_s_via_delta_h", &psq::theta_s_via_deltaH, py::arg("params"),
          "Relaxation rate as the largest real zero of Delta H_K");
    m.def("delta_h_roots", &psq::delta_h_roots, py::arg("params"), py::arg("theta_min"),
          "All Delta H_K zeros in [theta_min, 0), ascending");
    m.def("asymp_subcritical", &psq::asymp_subcritical, py::arg("params"));
    m.def("asymp_critical", &psq::asymp_critical, py::arg("params"),
          py::arg("eta_window") = 3.0);
    m.def("asymp_supercritical", &psq::asymp_supercritical, py::arg("params"));
    m.def("theta_s_auto", &psq::theta_s_auto, py::arg("params"),
          "Exact relaxation rate plus the regime-dispatched asymptotic estimate");

    py::enum_<psq::TimeQuantity>(m, "TimeQuantity")
        .value("density", psq::TimeQuantity::density)
        .value("survival", psq::TimeQuantity::survival);

    py::enum_<psq::TimeMethod>(m, "TimeMethod")
        .value("ode", psq::TimeMethod::ode)
        .value("spectral", psq::TimeMethod::spectral)
        .value("inversion", psq::TimeMethod::inversion);

    py::class_<psq::TimeGridSolution>(m, "TimeGridSolution")
        .def_readonly("params", &psq::TimeGridSolution::params)
        .def_readonly("t_grid", &psq::TimeGridSolution::t_grid)
        .def_readonly("density", &psq::TimeGridSolution::density)
        .def_readonly("survival", &psq::TimeGridSolution::survival)
        .def_readonly("method", &psq::TimeGridSolution::method);

    py::class_<psq::TailFit>(m, "TailFit")
        .def_readonly("slope", &psq::TailFit::slope)
        .def_readonly("intercept", &psq::TailFit::intercept);

    m.def("ode_evolve", &psq::ode_evolve, py::arg("params"), py::arg("t_grid"),
          py::arg("quantity"), "Integrate the density or survival system");
    m.def("spectral_expand", &psq::spectral_expand, py::arg("params"), py::arg("t_grid"),
          "Eigen-expansion of density and survival");
    m.def("invert_transform", &psq::invert_transform, py::arg("params"), py::arg("n"),
          py::arg("t_grid"), "Density by numerical transform inversion (t > 0)");
    m.def("tail_fit", &psq::tail_fit, py::arg("solution"), py::arg("t1"), py::arg("t2"),
          py::arg("n") = 0, "Least-squares tail slope of log survival");
    m.def("default_time_grid", &psq::default_time_grid, py::arg("params"));

    py::class_<psq::SojournSamples>(m, "SojournSamples")
        .def_readonly("params", &psq::SojournSamples::params)
        .def_readonly("stationary", &psq::SojournSamples::stationary)
        .def_readonly("n_initial", &psq::SojournSamples::n_initial)
        .def_readonly("seed", &psq::SojournSamples::seed)
        .def_readonly("samples", &psq::SojournSamples::samples)
        .def_readonly("initial_states", &psq::SojournSamples::initial_states)
        .def_readonly("blocked_count", &psq::SojournSamples::blocked_count);

    m.def("simulate_conditional", &psq::simulate_conditional, py::arg("params"),
          py::arg("n"), py::arg("count"), py::arg("seed"), py::arg("threads") = 1,
          "Monte Carlo sojourns of an arrival finding n others in system");
    m.def("simulate_stationary", &psq::simulate_stationary, py::arg("params"),
          py::arg("count"), py::arg("seed"),
          "Monte Carlo sojourns of arrivals to the stationary queue");

    py::class_<psq::AiryValue>(m, "AiryValue")
        .def_readonly("argument", &psq::AiryValue::argument)
        .def_readonly("ai", &psq::AiryValue::ai)
        .def_readonly("ai_prime", &psq::AiryValue::ai_prime);

    m.def("airy", &psq::airy, py::arg("x"), "Ai(x) and Ai'(x) for |x| <= 20");
    m.def("airy_max_root", &psq::airy_max_root, "Largest real zero of Ai");
    m.def("airy_prime_max_root", &psq::airy_prime_max_root, "Largest real zero of Ai'");
    m.def("solve_r1", &psq::solve_r1, py::arg("eta"),
          "Largest r with Ai'(r + eta^2/4) = -(eta/2) Ai(r + eta^2/4)");
    m.def("gamma_fn", &psq::gamma_fn, py::arg("x"), "Gamma function, x > 0");
}
