// Python bindings for the core operations: spaces and operators, projector
// construction, reduced dynamics, coherent-state tools, the phase-space
// lattice, and the classical constraint analysis.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "projq/classical.hpp"
#include "projq/dynamics.hpp"
#include "projq/errors.hpp"
#include "projq/fock.hpp"
#include "projq/germ.hpp"
#include "projq/lattice.hpp"
#include "projq/pipelines.hpp"
#include "projq/quantize.hpp"
#include "projq/scenario.hpp"
#include "projq/spin.hpp"

namespace py = pybind11;
using namespace projq;

PYBIND11_MODULE(projq, m) {
    m.doc() = "Constrained quantization via weak projection: truncated Fock and "
              "spin spaces, spectral and strength-resolved projectors, reduced "
              "evolution products, phase-space lattice propagators, and classical "
              "constraint classification.";
    m.attr("__version__") = version_string;

    // The base translator is registered first so that it runs last: pybind11
    // applies translators in reverse registration order.
    py::register_exception<error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
    py::register_exception<input_error>(m, "InputError", PyExc_ValueError);

    // Registered before any function that uses a default-constructed value
    // as a default argument; pybind11 resolves defaults at registration time.
    py::class_<tolerances>(m, "Tolerances").def(py::init<>());

    // ---------------------------------------------------------- spaces --
    py::class_<hilbert_space>(m, "HilbertSpace")
        .def_static("fock", &hilbert_space::fock, py::arg("cutoff"))
        .def_static("spin_sum", &hilbert_space::spin_sum, py::arg("spins"))
        .def_static("product", &hilbert_space::product, py::arg("left"), py::arg("right"))
        .def_readonly("dim", &hilbert_space::dim)
        .def("describe", &hilbert_space::describe)
        .def("__repr__", &hilbert_space::describe);

    py::class_<op_matrix>(m, "Operator")
        .def(py::init<hilbert_space, matrix, bool, double>(), py::arg("space"),
             py::arg("entries"), py::arg("hermitian") = false,
             py::arg("hermiticity_tol") = 1e-12)
        .def_readonly("space", &op_matrix::space)
        .def_readonly("entries", &op_matrix::entries)
        .def_readonly("hermitian", &op_matrix::hermitian)
        .def("dim", &op_matrix::dim);

    py::class_<state_vector>(m, "State")
        .def_readonly("space", &state_vector::space)
        .def_readonly("amplitudes", &state_vector::amplitudes)
        .def("norm", &state_vector::norm);

    m.def("identity_op", &identity_op, py::arg("space"));
    m.def("tensor_product", &tensor_product, py::arg("a"), py::arg("b"));

    // ------------------------------------------------- fock-space tools --
    py::class_<coherent_label>(m, "CoherentLabel")
        .def(py::init<double, double>(), py::arg("p"), py::arg("q"))
        .def_readwrite("p", &coherent_label::p)
        .def_readwrite("q", &coherent_label::q);

    m.def("canonical_pair", &canonical_pair, py::arg("space"),
          "Truncated momentum/position pair (P, Q)");
    m.def("ladder_pair", &ladder_pair, py::arg("space"));
    m.def("trust_radius", &trust_radius, py::arg("cutoff"), py::arg("tail") = 1e-10);
    m.def("coherent_state", &coherent_state, py::arg("space"), py::arg("label"),
          py::arg("tol") = tolerances{});
    m.def("overlap", &overlap, py::arg("bra"), py::arg("ket"));
    m.def("coherent_overlap_formula", &coherent_overlap_formula, py::arg("bra"),
          py::arg("ket"));
    m.def("weyl_residual", &weyl_residual, py::arg("space"), py::arg("p"), py::arg("q"),
          py::arg("window") = std::nullopt);
    m.def("fubini_study_metric", &fubini_study_metric, py::arg("space"), py::arg("label"),
          py::arg("step") = 1e-4, py::arg("tol") = tolerances{});
    m.def("lower_symbol", &lower_symbol, py::arg("op"), py::arg("label"),
          py::arg("tol") = tolerances{});

    // -------------------------------------------------------- spin tools --
    m.def("rotation_generators", &rotation_generators, py::arg("space"));
    m.def("coupled_pair_generators", &coupled_pair_generators, py::arg("j"));
    m.def("casimir", &casimir, py::arg("generators"));

    // -------------------------------------------------------- projection --
    py::class_<constraint_set>(m, "ConstraintSet")
        .def(py::init<hilbert_space, std::vector<op_matrix>, double>(), py::arg("space"),
             py::arg("phis"), py::arg("hermiticity_tol") = 1e-12)
        .def_readonly("space", &constraint_set::space)
        .def_readonly("phis", &constraint_set::phis)
        .def("count", &constraint_set::count);
    m.def("sum_of_squares", &sum_of_squares, py::arg("constraints"));

    py::class_<delta_policy>(m, "DeltaPolicy")
        .def_static("gap_midpoint", &delta_policy::gap_midpoint)
        .def_static("fixed", &delta_policy::fixed, py::arg("value"));
    m.def("choose_delta", &choose_delta, py::arg("x"), py::arg("policy"),
          py::arg("cluster_rel_gap") = 1e-6);

    py::class_<projector>(m, "Projector")
        .def_readonly("mat", &projector::mat)
        .def_readonly("delta_sq", &projector::delta_sq)
        .def_readonly("rank", &projector::rank);
    m.def("spectral_projector", &spectral_projector, py::arg("x"), py::arg("delta_sq"),
          py::arg("tol") = tolerances{});
    m.def("is_observable", &is_observable, py::arg("op"), py::arg("projector"),
          py::arg("tol") = 1e-9);
    m.def("physical_basis", &physical_basis, py::arg("projector"));

    py::class_<gamma_quadrature>(m, "GammaQuadrature")
        .def(py::init([](double gamma_max, int nodes) {
                 gamma_quadrature q;
                 q.gamma_max = gamma_max;
                 q.nodes = nodes;
                 return q;
             }),
             py::arg("gamma_max") = 50.0, py::arg("nodes") = 16)
        .def_readwrite("gamma_max", &gamma_quadrature::gamma_max)
        .def_readwrite("nodes", &gamma_quadrature::nodes);
    py::class_<gamma_projector_result>(m, "GammaProjectorResult")
        .def_readonly("mat", &gamma_projector_result::mat)
        .def_readonly("boundary_flags", &gamma_projector_result::boundary_flags)
        .def_readonly("resolution_band", &gamma_projector_result::resolution_band);
    m.def("gamma_integral_projector", &gamma_integral_projector, py::arg("x"),
          py::arg("delta_sq"), py::arg("quad") = gamma_quadrature{},
          py::arg("eps_eff") = 1.0, py::arg("threads") = 1);

    // ---------------------------------------------------------- dynamics --
    m.def("exact_evolution", &exact_evolution, py::arg("h"), py::arg("t"));
    m.def("reduced_evolution", &reduced_evolution, py::arg("h"), py::arg("projector"),
          py::arg("t"));
    m.def("chernoff_product", &chernoff_product, py::arg("h"), py::arg("projector"),
          py::arg("t"), py::arg("n"));
    py::class_<evolution_report>(m, "EvolutionReport")
        .def_readonly("n_values", &evolution_report::n_values)
        .def_readonly("errors", &evolution_report::errors)
        .def_readonly("fitted_order", &evolution_report::fitted_order)
        .def_readonly("order_defined", &evolution_report::order_defined);
    m.def("chernoff_convergence", &chernoff_convergence, py::arg("h"),
          py::arg("projector"), py::arg("t"), py::arg("ladder"));

    // -------------------------------------------------------------- germ --
    m.def("germ_quotient", &germ_quotient, py::arg("bra"), py::arg("ket"),
          py::arg("delta"));
    py::class_<germ_report>(m, "GermReport")
        .def_readonly("schedule", &germ_report::schedule)
        .def_readonly("values", &germ_report::values)
        .def_readonly("extrapolant", &germ_report::extrapolant)
        .def_readonly("error_estimate", &germ_report::error_estimate);
    m.def("germ_limit", &germ_limit, py::arg("bra"), py::arg("ket"), py::arg("schedule"));

    // ----------------------------------------------------------- lattice --
    py::class_<phase_grid>(m, "PhaseGrid")
        .def_static("square", &phase_grid::square, py::arg("radius"), py::arg("spacing"))
        .def_readonly("radius", &phase_grid::radius)
        .def_readonly("spacing", &phase_grid::spacing)
        .def("size", &phase_grid::size);
    m.def("resolution_residual", &resolution_residual, py::arg("space"), py::arg("grid"),
          py::arg("probe_level"), py::arg("tol") = tolerances{});
    py::class_<lattice_result>(m, "LatticeResult")
        .def_readonly("value", &lattice_result::value)
        .def_readonly("slices", &lattice_result::slices)
        .def_readonly("reference", &lattice_result::reference)
        .def_readonly("deviation", &lattice_result::deviation)
        .def_readonly("quadrature_limited", &lattice_result::quadrature_limited);
    m.def("lattice_propagator", &lattice_propagator, py::arg("h"), py::arg("to"),
          py::arg("from_"), py::arg("t"), py::arg("n"), py::arg("grid"),
          py::arg("tol") = tolerances{});
    m.def("constrained_lattice_propagator", &constrained_lattice_propagator, py::arg("h"),
          py::arg("constraints"), py::arg("delta_sq"), py::arg("to"), py::arg("from_"),
          py::arg("t"), py::arg("n"), py::arg("grid"),
          py::arg("quad") = gamma_quadrature{}, py::arg("tol") = tolerances{},
          py::arg("threads") = 1);

    py::class_<lambda_average_report>(m, "LambdaAverageReport")
        .def_readonly("eta_ladder", &lambda_average_report::eta_ladder)
        .def_readonly("values", &lambda_average_report::values)
        .def_readonly("extrapolant", &lambda_average_report::extrapolant);
    m.def("lambda_average_extrapolated", &lambda_average_extrapolated, py::arg("phi"),
          py::arg("gamma"), py::arg("a"),
          py::arg("eta_ladder") = std::vector<double>{1e-2, 1e-3, 1e-4});
    py::class_<insufficiency_report>(m, "InsufficiencyReport")
        .def_readonly("eps_ladder", &insufficiency_report::eps_ladder)
        .def_readonly("first_order_defect", &insufficiency_report::first_order_defect)
        .def_readonly("second_order_defect", &insufficiency_report::second_order_defect)
        .def_readonly("first_order_slope", &insufficiency_report::first_order_slope)
        .def_readonly("second_order_slope", &insufficiency_report::second_order_slope)
        .def_readonly("exact", &insufficiency_report::exact);
    m.def("first_order_insufficiency_demo", &first_order_insufficiency_demo,
          py::arg("constraints"), py::arg("delta_sq"), py::arg("eps_ladder"),
          py::arg("gamma") = 0.7);

    // --------------------------------------------------------- classical --
    py::class_<phase_polynomial>(m, "PhasePolynomial")
        .def_readonly("dof", &phase_polynomial::dof)
        .def("degree", &phase_polynomial::degree)
        .def("is_zero", &phase_polynomial::is_zero)
        .def("__str__", &phase_polynomial::str)
        .def("__repr__", &phase_polynomial::str)
        .def("__add__", [](const phase_polynomial& a, const phase_polynomial& b) {
            return a + b;
        })
        .def("__sub__", [](const phase_polynomial& a, const phase_polynomial& b) {
            return a - b;
        })
        .def("__mul__", [](const phase_polynomial& a, const phase_polynomial& b) {
            return a * b;
        })
        .def("__rmul__", [](const phase_polynomial& a, double c) { return c * a; });
    m.def("parse_polynomial", &parse_polynomial, py::arg("text"),
          "Parse a phase-space polynomial such as '0.5*p1^2 + q1*q2'");
    m.def("poisson_bracket", &poisson_bracket, py::arg("f"), py::arg("g"));
    m.def("quantize_polynomial", &quantize_polynomial, py::arg("space"), py::arg("poly"),
          "Symmetrically ordered operator for a one-freedom polynomial");

    py::class_<phase_point>(m, "PhasePoint")
        .def(py::init([](rvector q, rvector p) {
                 return phase_point{std::move(q), std::move(p)};
             }),
             py::arg("q"), py::arg("p"))
        .def_readwrite("q", &phase_point::q)
        .def_readwrite("p", &phase_point::p);

    py::class_<constraint_system>(m, "ConstraintSystem")
        .def(py::init<phase_polynomial, std::vector<phase_polynomial>>(), py::arg("h"),
             py::arg("phis"))
        .def_readonly("h", &constraint_system::h)
        .def_readonly("phis", &constraint_system::phis)
        .def_readonly("dof", &constraint_system::dof)
        .def_readonly("count", &constraint_system::count);

    py::enum_<constraint_verdict>(m, "ConstraintVerdict")
        .value("first_class_closed", constraint_verdict::first_class_closed)
        .value("first_class_open", constraint_verdict::first_class_open)
        .value("second_class", constraint_verdict::second_class)
        .value("mixed", constraint_verdict::mixed)
        .value("inconclusive", constraint_verdict::inconclusive);
    py::class_<classification_report>(m, "ClassificationReport")
        .def_readonly("verdict", &classification_report::verdict)
        .def_readonly("sample_count", &classification_report::sample_count)
        .def_readonly("bracket_matrix_min_singular_value",
                      &classification_report::bracket_matrix_min_singular_value)
        .def_readonly("secondary_constraint_suspected",
                      &classification_report::secondary_constraint_suspected);
    m.def("classify", &classify, py::arg("system"), py::arg("samples") = 40,
          py::arg("tol_first") = 1e-8, py::arg("tol_second") = 1e-6,
          py::arg("tol") = tolerances{}, py::arg("rng_seed") = 12345);
    m.def("surface_samples", &surface_samples, py::arg("phis"), py::arg("seeds"),
          py::arg("tol") = 1e-10, py::arg("rng_seed") = 12345);
    m.def("solve_multipliers", &solve_multipliers, py::arg("system"), py::arg("x"),
          py::arg("tol") = tolerances{});

    py::class_<multiplier_source>(m, "MultiplierSource")
        .def_static("auto_second_class", &multiplier_source::auto_second_class)
        .def_static("scheduled", &multiplier_source::scheduled, py::arg("fn"));
    py::class_<trajectory>(m, "Trajectory")
        .def_readonly("drift", &trajectory::drift)
        .def("point",
             [](const trajectory& t, std::size_t k) {
                 if (k >= t.points.size()) throw input_error("trajectory index out of range");
                 return t.points[k];
             },
             py::arg("k"))
        .def("size", [](const trajectory& t) { return t.points.size(); });
    m.def("integrate_constrained", &integrate_constrained, py::arg("system"),
          py::arg("source"), py::arg("x0"), py::arg("dt"), py::arg("steps"),
          py::arg("tol") = tolerances{});

    // ---------------------------------------------------------- pipeline --
    m.def("run_command", &run_command, py::arg("command"), py::arg("scenario_path"),
          py::arg("out_dir"), py::arg("seed") = std::nullopt,
          py::arg("threads") = std::nullopt,
          "Run one CLI pipeline; returns the process exit code");
}
