#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "plrec/analysis.hpp"
#include "plrec/quantum.hpp"
#include "plrec/recurrence.hpp"
#include "plrec/resonance.hpp"
#include "plrec/spectrum.hpp"
#include "plrec/units.hpp"

namespace py = pybind11;
using namespace plrec;

PYBIND11_MODULE(_core, m) {
    m.doc() = "recurrence time scales in periodically driven power-law wells";

    py::enum_<DomainKind>(m, "DomainKind")
        .value("symmetric", DomainKind::symmetric)
        .value("truncated", DomainKind::truncated);
    py::enum_<Regime>(m, "Regime")
        .value("tight", Regime::tight)
        .value("harmonic", Regime::harmonic)
        .value("loose", Regime::loose)
        .value("free_particle", Regime::free_particle);
    py::enum_<DriveShape>(m, "DriveShape")
        .value("potential", DriveShape::potential)
        .value("linear", DriveShape::linear);
    py::enum_<DetectionStatus>(m, "DetectionStatus")
        .value("found", DetectionStatus::found)
        .value("none", DetectionStatus::none)
        .value("weak", DetectionStatus::weak)
        .value("degenerate", DetectionStatus::degenerate);

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def(py::init(&make_potential), py::arg("V0"), py::arg("exponent_k"),
             py::arg("domain") = DomainKind::symmetric, py::arg("maslov_gamma") = -1)
        .def_readonly("V0", &PotentialSpec::V0)
        .def_readonly("exponent_k", &PotentialSpec::exponent_k)
        .def_readonly("maslov_gamma", &PotentialSpec::maslov_gamma)
        .def_readonly("domain", &PotentialSpec::domain)
        .def("rho", &PotentialSpec::rho)
        .def("value", &PotentialSpec::value)
        .def("turning_point", &PotentialSpec::turning_point);

    py::class_<SpectrumModel>(m, "SpectrumModel")
        .def_readonly("potential", &SpectrumModel::potential)
        .def_readonly("kbar", &SpectrumModel::kbar)
        .def_readonly("n_bar", &SpectrumModel::n_bar)
        .def_readonly("E_nbar", &SpectrumModel::E_nbar)
        .def_readonly("omega", &SpectrumModel::omega)
        .def_readonly("zeta", &SpectrumModel::zeta);

    py::class_<DriveSpec>(m, "DriveSpec")
        .def(py::init([](double lambda, double V, int N) {
                 DriveSpec d{lambda, V, N};
                 d.validate();
                 return d;
             }),
             py::arg("lambda_"), py::arg("V_coupling"), py::arg("N") = 1)
        .def_readonly("lambda_", &DriveSpec::lambda)
        .def_readonly("V_coupling", &DriveSpec::V_coupling)
        .def_readonly("N", &DriveSpec::N);

    py::class_<MathieuResult>(m, "MathieuResult")
        .def_readonly("q", &MathieuResult::q)
        .def_readonly("nu", &MathieuResult::nu)
        .def_readonly("a_nu", &MathieuResult::a_nu)
        .def_readonly("basis_size", &MathieuResult::basis_size);

    py::class_<QuasiEnergy>(m, "QuasiEnergy")
        .def_readonly("epsilon", &QuasiEnergy::epsilon)
        .def_readonly("nu", &QuasiEnergy::nu)
        .def_readonly("q", &QuasiEnergy::q)
        .def_readonly("a_nu", &QuasiEnergy::a_nu)
        .def_readonly("n_offset", &QuasiEnergy::n_offset);

    py::class_<PendulumBands>(m, "PendulumBands")
        .def_readonly("values", &PendulumBands::values)
        .def_readonly("dominant_offset", &PendulumBands::dominant_offset)
        .def_readonly("span", &PendulumBands::span);

    py::class_<RecurrenceTimes>(m, "RecurrenceTimes")
        .def_readonly("T0_cl", &RecurrenceTimes::T0_cl)
        .def_readonly("T0_Q", &RecurrenceTimes::T0_Q)
        .def_readonly("Tlam_cl", &RecurrenceTimes::Tlam_cl)
        .def_readonly("Tlam_Q", &RecurrenceTimes::Tlam_Q)
        .def_readonly("Delta", &RecurrenceTimes::Delta)
        .def_readonly("mu", &RecurrenceTimes::mu)
        .def_readonly("M0_cl", &RecurrenceTimes::M0_cl)
        .def_readonly("M0_Q", &RecurrenceTimes::M0_Q)
        .def_readonly("regime", &RecurrenceTimes::regime)
        .def_readonly("zeta_sign", &RecurrenceTimes::zeta_sign);

    py::class_<UndrivenTimes>(m, "UndrivenTimes")
        .def_readonly("T0_cl", &UndrivenTimes::T0_cl)
        .def_readonly("T0_Q", &UndrivenTimes::T0_Q)
        .def_readonly("regime", &UndrivenTimes::regime)
        .def_readonly("zeta_sign", &UndrivenTimes::zeta_sign);

    py::class_<DerivativeTimes>(m, "DerivativeTimes")
        .def_readonly("T1", &DerivativeTimes::T1)
        .def_readonly("T2", &DerivativeTimes::T2);

    py::class_<SumRuleResiduals>(m, "SumRuleResiduals")
        .def_readonly("tight", &SumRuleResiduals::tight)
        .def_readonly("loose", &SumRuleResiduals::loose);

    py::class_<Grid>(m, "Grid")
        .def(py::init([](double x_min, double x_max, int n_points) {
                 Grid g{x_min, x_max, n_points};
                 return g;
             }),
             py::arg("x_min"), py::arg("x_max"), py::arg("n_points"))
        .def_readonly("x_min", &Grid::x_min)
        .def_readonly("x_max", &Grid::x_max)
        .def_readonly("n_points", &Grid::n_points)
        .def("dx", &Grid::dx);

    py::class_<WaveState>(m, "WaveState")
        .def_readonly("grid", &WaveState::grid)
        .def_readonly("psi", &WaveState::psi)
        .def_readonly("t", &WaveState::t)
        .def("norm", &WaveState::norm);

    py::class_<EigenBasis>(m, "EigenBasis")
        .def_readonly("grid", &EigenBasis::grid)
        .def_readonly("kbar", &EigenBasis::kbar)
        .def_readonly("energies", &EigenBasis::energies)
        .def_readonly("states", &EigenBasis::states)
        .def("n_levels", &EigenBasis::n_levels);

    py::class_<PropagationOptions>(m, "PropagationOptions")
        .def(py::init<>())
        .def_readwrite("dt", &PropagationOptions::dt)
        .def_readwrite("n_steps", &PropagationOptions::n_steps)
        .def_readwrite("sample_stride", &PropagationOptions::sample_stride)
        .def_readwrite("shape", &PropagationOptions::shape)
        .def_readwrite("t0", &PropagationOptions::t0)
        .def_readwrite("check_boundary", &PropagationOptions::check_boundary);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("autocorr", &Trajectory::autocorr)
        .def_readonly("norms", &Trajectory::norms)
        .def_readonly("final_state", &Trajectory::final_state)
        .def_readonly("max_norm_drift", &Trajectory::max_norm_drift);

    py::class_<Autocorrelation>(m, "Autocorrelation")
        .def_readonly("times", &Autocorrelation::times)
        .def_readonly("A", &Autocorrelation::A);

    py::class_<ClassicalPeriodOptions>(m, "ClassicalPeriodOptions")
        .def(py::init<>())
        .def_readwrite("prominence", &ClassicalPeriodOptions::prominence);

    py::class_<RevivalOptions>(m, "RevivalOptions")
        .def(py::init<>())
        .def_readwrite("window_factor", &RevivalOptions::window_factor)
        .def_readwrite("search_start_factor", &RevivalOptions::search_start_factor)
        .def_readwrite("collapse_threshold", &RevivalOptions::collapse_threshold)
        .def_readwrite("weak_threshold", &RevivalOptions::weak_threshold)
        .def_readwrite("flat_tolerance", &RevivalOptions::flat_tolerance)
        .def_readwrite("mirror_ratio_min", &RevivalOptions::mirror_ratio_min)
        .def_readwrite("mirror_ratio_max", &RevivalOptions::mirror_ratio_max);

    py::class_<PeakDetection>(m, "PeakDetection")
        .def_readonly("status", &PeakDetection::status)
        .def_readonly("time", &PeakDetection::time)
        .def_readonly("uncertainty", &PeakDetection::uncertainty)
        .def_readonly("height", &PeakDetection::height);

    py::class_<RevivalDetection>(m, "RevivalDetection")
        .def_readonly("status", &RevivalDetection::status)
        .def_readonly("time", &RevivalDetection::time)
        .def_readonly("uncertainty", &RevivalDetection::uncertainty)
        .def_readonly("height", &RevivalDetection::height)
        .def_readonly("mirror_reassigned", &RevivalDetection::mirror_reassigned)
        .def_readonly("mirror_time", &RevivalDetection::mirror_time);

    py::class_<RecurrenceReport>(m, "RecurrenceReport")
        .def_readonly("classical", &RecurrenceReport::classical)
        .def_readonly("revival", &RecurrenceReport::revival)
        .def_readonly("T_cl_predicted", &RecurrenceReport::T_cl_predicted)
        .def_readonly("T_Q_predicted", &RecurrenceReport::T_Q_predicted)
        .def_readonly("classical_relative_error",
                      &RecurrenceReport::classical_relative_error)
        .def_readonly("revival_relative_error",
                      &RecurrenceReport::revival_relative_error)
        .def_readonly("regime", &RecurrenceReport::regime)
        .def_readonly("notes", &RecurrenceReport::notes);

    m.def("derive_kbar", &derive_kbar, py::arg("a"), py::arg("m"), py::arg("hbar"),
          py::arg("omega"));
    m.def("scale_energy", &scale_energy, py::arg("E_physical"), py::arg("hbar"),
          py::arg("omega"));
    m.def("wkb_energy", &wkb_energy, py::arg("potential"), py::arg("kbar"),
          py::arg("n"));
    m.def("frequency_omega", &frequency_omega);
    m.def("nonlinearity_zeta", &nonlinearity_zeta);
    m.def("build_spectrum_model", &build_spectrum_model);
    m.def("mathieu_char_value", &mathieu_char_value, py::arg("nu"), py::arg("q"),
          py::arg("basis_size") = 0);
    m.def("quasienergy", &quasienergy);
    m.def("pendulum_matrix_eigs", &pendulum_matrix_eigs, py::arg("spectrum"),
          py::arg("drive"), py::arg("span") = 0);
    m.def("undriven_times", &undriven_times);
    m.def("driven_times", &driven_times);
    m.def("times_from_quasienergy",
          py::overload_cast<const SpectrumModel&, const DriveSpec&>(
              &times_from_quasienergy));
    m.def("sum_rule_check", &sum_rule_check);
    m.def("auto_grid", &auto_grid, py::arg("potential"), py::arg("kbar"),
          py::arg("n_levels"), py::arg("min_points") = 256);
    m.def("solve_eigen", &solve_eigen);
    m.def("build_wavepacket", &build_wavepacket);
    m.def(
        "propagate",
        [](const WaveState& initial, const PotentialSpec& potential,
           const DriveSpec& drive, double kbar, const PropagationOptions& options) {
            return propagate(initial, potential, drive, kbar, options);
        },
        py::arg("initial"), py::arg("potential"), py::arg("drive"), py::arg("kbar"),
        py::arg("options"));
    m.def("coupling_estimate", &coupling_estimate);
    m.def("autocorrelate",
          py::overload_cast<const Trajectory&>(&autocorrelate));
    m.def("detect_classical_period", &detect_classical_period, py::arg("ac"),
          py::arg("options") = ClassicalPeriodOptions{});
    m.def("detect_revival", &detect_revival, py::arg("ac"), py::arg("T_cl_hint"),
          py::arg("options") = RevivalOptions{});
    m.def("compare", &compare);
}
