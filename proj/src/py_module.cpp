#include "nhlat/experiments.hpp"
#include "nhlat/io.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace nhlat;

PYBIND11_MODULE(_nhlat, m)
{
    m.doc() = "coupled lossy two-chain lattice: spectra, winding, decay";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ComputeError>(m, "ComputeError", PyExc_RuntimeError);

    py::class_<LatticeParams>(m, "LatticeParams")
        .def(py::init<>())
        .def(py::init([](int n, double gamma, double delta, double v) {
                 return LatticeParams{n, gamma, delta, v};
             }),
             py::arg("n") = 61, py::arg("gamma") = 0.5, py::arg("delta") = 0.05,
             py::arg("v") = 4.0)
        .def_readwrite("n", &LatticeParams::n)
        .def_readwrite("gamma", &LatticeParams::gamma)
        .def_readwrite("delta", &LatticeParams::delta)
        .def_readwrite("v", &LatticeParams::v)
        .def("__repr__", [](const LatticeParams& p) {
            return "LatticeParams(" + param_comment(p) + ")";
        });

    m.def("site_loss", &site_loss, py::arg("params"), py::arg("j"),
          "loss rate at 1-based site j");
    m.def("build_obc_hamiltonian", &build_obc_hamiltonian, py::arg("params"),
          "dense 2n x 2n open-chain Hamiltonian");
    m.def("bloch_hamiltonian", &bloch_hamiltonian, py::arg("k"), py::arg("params"),
          "4 x 4 momentum-space block at k");
    m.def(
        "pbc_dispersion",
        [](double k, double v, double gamma) {
            const DispersionPair d = pbc_dispersion(k, v, gamma);
            return py::make_tuple(d.minus, d.plus);
        },
        py::arg("k"), py::arg("v"), py::arg("gamma"),
        "uncoupled-chain band pair (E_minus, E_plus) at k");

    py::enum_<Boundary>(m, "Boundary")
        .value("obc", Boundary::obc)
        .value("pbc", Boundary::pbc);

    py::class_<SpectrumResult>(m, "SpectrumResult")
        .def_readonly("eigenvalues", &SpectrumResult::eigenvalues)
        .def_readonly("eigenvectors", &SpectrumResult::eigenvectors)
        .def_readonly("max_residual", &SpectrumResult::max_residual)
        .def_readonly("h_norm", &SpectrumResult::h_norm)
        .def_readonly("params", &SpectrumResult::params)
        .def_readonly("boundary", &SpectrumResult::boundary);

    m.def("diagonalize", &diagonalize, py::arg("h"), py::arg("params"),
          py::arg("boundary") = Boundary::obc,
          "sorted eigensystem with residual check");

    py::enum_<Branch>(m, "Branch")
        .value("upper", Branch::upper)
        .value("lower", Branch::lower);

    py::class_<WindingResult>(m, "WindingResult")
        .def_readonly("nu", &WindingResult::nu)
        .def_readonly("residual", &WindingResult::residual)
        .def_readonly("min_distance", &WindingResult::min_distance)
        .def_readonly("raw", &WindingResult::raw);

    m.def("winding_number", &winding_number, py::arg("e0"), py::arg("v"),
          py::arg("gamma"), py::arg("k_samples") = 4001,
          py::arg("branch") = Branch::upper,
          "signed number of times the chosen band loop encircles e0");

    py::class_<BlochLine>(m, "BlochLine")
        .def_readonly("present", &BlochLine::present)
        .def_readonly("k_min", &BlochLine::k_min)
        .def_readonly("k_max", &BlochLine::k_max)
        .def_readonly("e_min", &BlochLine::e_min)
        .def_readonly("e_max", &BlochLine::e_max)
        .def_readonly("k_length", &BlochLine::k_length)
        .def_readonly("e_length", &BlochLine::e_length);

    py::class_<LoopGeometry>(m, "LoopGeometry")
        .def_readonly("upper", &LoopGeometry::upper)
        .def_readonly("lower", &LoopGeometry::lower)
        .def_readonly("bloch", &LoopGeometry::bloch)
        .def_readonly("v", &LoopGeometry::v)
        .def_readonly("gamma", &LoopGeometry::gamma)
        .def_readonly("delta", &LoopGeometry::delta)
        .def_readonly("k_samples", &LoopGeometry::k_samples);

    m.def("loop_geometry", &loop_geometry, py::arg("v"), py::arg("gamma"),
          py::arg("delta") = 0.0, py::arg("k_samples") = 4001,
          "periodic-spectrum loops and the degenerate line segment");

    py::enum_<StateLabel>(m, "StateLabel")
        .value("skin", StateLabel::skin)
        .value("extended", StateLabel::extended)
        .value("sfl", StateLabel::sfl)
        .value("bulk_extended_by_size", StateLabel::bulk_extended_by_size)
        .value("boundary_ambiguous", StateLabel::boundary_ambiguous);

    py::enum_<Side>(m, "Side")
        .value("left", Side::left)
        .value("right", Side::right)
        .value("none", Side::none);

    py::class_<StateClass>(m, "StateClass")
        .def_readonly("label", &StateClass::label)
        .def_readonly("side_a", &StateClass::side_a)
        .def_readonly("side_b", &StateClass::side_b)
        .def_readonly("com_ratio", &StateClass::com_ratio);

    m.def("classify_states", &classify_states, py::arg("spectrum"), py::arg("loops"),
          py::arg("snap_tol") = 1e-6);

    py::enum_<ModeSelector>(m, "ModeSelector")
        .value("lowest_im", ModeSelector::lowest_im)
        .value("smallest_abs_im", ModeSelector::smallest_abs_im);

    py::class_<ScalingPoint>(m, "ScalingPoint")
        .def_readonly("n", &ScalingPoint::n)
        .def_readonly("com_ratio", &ScalingPoint::com_ratio)
        .def_readonly("eigenvalue", &ScalingPoint::eigenvalue);

    m.def("sfl_scaling", &sfl_scaling, py::arg("base"), py::arg("n_values"),
          py::arg("selector") = ModeSelector::lowest_im,
          "center-of-mass ratio of the tracked mode across chain sizes");

    m.def("obc_to_pbc_distance", &obc_to_pbc_distance, py::arg("spectrum"),
          py::arg("loops"),
          "largest distance from an open-chain eigenvalue to the periodic loops");

    py::class_<EvolutionSpec>(m, "EvolutionSpec")
        .def(py::init<>())
        .def_readwrite("params", &EvolutionSpec::params)
        .def_readwrite("start_site", &EvolutionSpec::start_site)
        .def_readwrite("t_max", &EvolutionSpec::t_max)
        .def_readwrite("tail_epsilon", &EvolutionSpec::tail_epsilon)
        .def_readwrite("sampling_dt", &EvolutionSpec::sampling_dt)
        .def_readwrite("t_cap", &EvolutionSpec::t_cap)
        .def_readwrite("store_states", &EvolutionSpec::store_states);

    m.def("initial_state", &initial_state, py::arg("params"), py::arg("start_site"));

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("power", &Trajectory::power)
        .def_readonly("loss_power", &Trajectory::loss_power)
        .def_readonly("states", &Trajectory::states);

    m.def("evolve", &evolve, py::arg("spec"),
          "propagate the quench on a uniform sampling grid");
    m.def("evolve_rk", &evolve_rk, py::arg("spec"), py::arg("rel_tol") = 1e-10,
          py::arg("abs_tol") = 1e-12, "adaptive Runge-Kutta cross-check");

    py::class_<DecayProfile>(m, "DecayProfile")
        .def_readonly("p_a", &DecayProfile::p_a)
        .def_readonly("p_b", &DecayProfile::p_b)
        .def_readonly("residual", &DecayProfile::residual)
        .def_readonly("ratio_a", &DecayProfile::ratio_a)
        .def_readonly("ratio_b", &DecayProfile::ratio_b)
        .def_readonly("p_min_a", &DecayProfile::p_min_a)
        .def_readonly("p_min_b", &DecayProfile::p_min_b)
        .def_readonly("argmin_a", &DecayProfile::argmin_a)
        .def_readonly("argmin_b", &DecayProfile::argmin_b)
        .def_readonly("params", &DecayProfile::params)
        .def_readonly("start_site", &DecayProfile::start_site)
        .def_readonly("used_quadrature", &DecayProfile::used_quadrature);

    m.def("decay_profile", &decay_profile, py::arg("spec"),
          "site-resolved integrated loss, closed form");
    m.def("decay_profile_quadrature", &decay_profile_quadrature, py::arg("spec"),
          "site-resolved integrated loss, sampled quadrature");
    m.def("power_balance_defect", &power_balance_defect, py::arg("trajectory"),
          py::arg("params"),
          "worst mismatch between dP/dt and the sampled loss power");

    py::enum_<SymmetryVariant>(m, "SymmetryVariant")
        .value("flip_gamma_both", SymmetryVariant::flip_gamma_both)
        .value("flip_gamma_b_only", SymmetryVariant::flip_gamma_b_only)
        .value("zero_gamma_b_only", SymmetryVariant::zero_gamma_b_only);

    py::class_<SymmetryReport>(m, "SymmetryReport")
        .def_readonly("variant", &SymmetryReport::variant)
        .def_readonly("profile_diff_ab", &SymmetryReport::profile_diff_ab)
        .def_readonly("profile_diff_ba", &SymmetryReport::profile_diff_ba)
        .def_readonly("state_diff", &SymmetryReport::state_diff)
        .def_readonly("asymmetry_b", &SymmetryReport::asymmetry_b)
        .def_readonly("ratio_a", &SymmetryReport::ratio_a);

    m.def("symmetry_probe", &symmetry_probe, py::arg("spec"), py::arg("variant"));

    py::enum_<SweepAxis>(m, "SweepAxis")
        .value("v", SweepAxis::v)
        .value("delta", SweepAxis::delta)
        .value("gamma", SweepAxis::gamma)
        .value("n", SweepAxis::n);

    py::enum_<Observable>(m, "Observable")
        .value("p_edge_a", Observable::p_edge_a)
        .value("p_edge_b", Observable::p_edge_b)
        .value("ratio_a", Observable::ratio_a)
        .value("ratio_b", Observable::ratio_b)
        .value("bloch_line_length", Observable::bloch_line_length)
        .value("imaginary_gap", Observable::imaginary_gap);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("axis", &SweepSpec::axis)
        .def_readwrite("values", &SweepSpec::values)
        .def_readwrite("observable", &SweepSpec::observable)
        .def_readwrite("base", &SweepSpec::base)
        .def_readwrite("start_site", &SweepSpec::start_site)
        .def_readwrite("tail_epsilon", &SweepSpec::tail_epsilon)
        .def_readwrite("k_samples", &SweepSpec::k_samples)
        .def_readwrite("point_budget", &SweepSpec::point_budget)
        .def_readwrite("jobs", &SweepSpec::jobs);

    py::class_<SweepRecord>(m, "SweepRecord")
        .def_readonly("value", &SweepRecord::value)
        .def_readonly("observable", &SweepRecord::observable)
        .def_readonly("residual", &SweepRecord::residual)
        .def_readonly("status", &SweepRecord::status)
        .def_readonly("wall_time", &SweepRecord::wall_time)
        .def_readonly("start_site", &SweepRecord::start_site);

    m.def("run_sweep", &run_sweep, py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<ReproduceResult>(m, "ReproduceResult")
        .def_readonly("figure_id", &ReproduceResult::figure_id)
        .def_readonly("files", &ReproduceResult::files);

    m.def("reproduce", &reproduce, py::arg("figure_id"), py::arg("out_dir"),
          py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("known_figures", &known_figures);
}
