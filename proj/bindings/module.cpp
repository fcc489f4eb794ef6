#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qpart/dissipative.hpp"
#include "qpart/errors.hpp"
#include "qpart/field_io.hpp"
#include "qpart/harmonic.hpp"
#include "qpart/integrate.hpp"
#include "qpart/render.hpp"
#include "qpart/run_config.hpp"
#include "qpart/swing.hpp"
#include "qpart/verify.hpp"

namespace py = pybind11;
using namespace qpart;

namespace {

std::vector<Observable> resolve_observables(const std::vector<std::string>& names) {
    std::vector<Observable> out;
    out.reserve(names.size());
    for (const auto& n : names) {
        out.push_back(make_builtin_observable(n));
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_qpart, m) {
    m.doc() = "time-averages and ergodic partitions of quasiperiodically forced systems";

    py::register_exception<ValidationError>(m, "QpartValidationError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "QpartNumericError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "QpartIoError", PyExc_IOError);

    py::class_<QuasiperiodicForcing>(m, "QuasiperiodicForcing")
        .def(py::init<std::vector<double>, std::vector<double>, std::vector<double>>(),
             py::arg("frequencies"), py::arg("amplitudes"), py::arg("phases"))
        .def_property_readonly("count", &QuasiperiodicForcing::count)
        .def_property_readonly("frequencies", &QuasiperiodicForcing::frequencies)
        .def_property_readonly("amplitudes", &QuasiperiodicForcing::amplitudes)
        .def_property_readonly("phases", &QuasiperiodicForcing::phases)
        .def("base_period", &QuasiperiodicForcing::base_period)
        .def("resonance_warnings", &QuasiperiodicForcing::resonance_warnings,
             py::arg("k_max") = 5, py::arg("eps") = 1e-9);

    py::class_<SystemModel>(m, "SystemModel")
        .def_property_readonly("dim_m", &SystemModel::dim_m)
        .def_property_readonly("dim", &SystemModel::dim)
        .def_property_readonly("name", [](const SystemModel& s) { return std::string(s.name()); })
        .def("rhs",
             [](const SystemModel& s, std::vector<double> x) {
                 if (static_cast<int>(x.size()) != s.dim()) {
                     throw ValidationError("rhs: state has wrong dimension");
                 }
                 std::vector<double> dx(x.size());
                 s.rhs(x, dx);
                 return dx;
             })
        .def("exact_solution",
             [](const SystemModel& s, std::vector<double> ic, double t) {
                 if (static_cast<int>(ic.size()) != s.dim()) {
                     throw ValidationError("exact_solution: state has wrong dimension");
                 }
                 return s.exact_solution(ic, t);
             })
        .def("exact_average", [](const SystemModel& s, std::vector<double> ic) {
            if (static_cast<int>(ic.size()) != s.dim()) {
                throw ValidationError("exact_average: state has wrong dimension");
            }
            return s.exact_average(ic);
        });

    py::class_<HarmonicModel, SystemModel>(m, "HarmonicModel")
        .def(py::init<QuasiperiodicForcing>(), py::arg("forcing"))
        .def("level_set_center", [](const HarmonicModel& h, std::vector<double> phases) {
            return h.level_set_center(phases);
        });

    py::class_<DissipativeModel, SystemModel>(m, "DissipativeModel")
        .def(py::init<double, QuasiperiodicForcing>(), py::arg("decay_rate"), py::arg("forcing"));

    py::class_<SwingParameters>(m, "SwingParameters")
        .def(py::init([](double p_m, double b, double b_int, int generators,
                         std::vector<int> modes, std::vector<double> amplitudes,
                         double amplitude_rms) {
                 SwingParameters p;
                 p.p_m = p_m;
                 p.b = b;
                 p.b_int = b_int;
                 p.generator_count = generators;
                 p.modes = std::move(modes);
                 p.amplitudes = std::move(amplitudes);
                 p.amplitude_rms = amplitude_rms;
                 p.validate();
                 return p;
             }),
             py::arg("p_m") = 0.95, py::arg("b") = 1.0, py::arg("b_int") = 100.0,
             py::arg("generators") = 20, py::arg("modes") = std::vector<int>{1},
             py::arg("amplitudes") = std::vector<double>{}, py::arg("amplitude_rms") = 1.5)
        .def_readonly("p_m", &SwingParameters::p_m)
        .def_readonly("b", &SwingParameters::b)
        .def_readonly("b_int", &SwingParameters::b_int)
        .def_readonly("generators", &SwingParameters::generator_count)
        .def_readonly("modes", &SwingParameters::modes)
        .def("resolved_amplitudes", &SwingParameters::resolved_amplitudes);

    m.def("swing_mode_frequency", &swing_mode_frequency, py::arg("j"), py::arg("params"));
    m.def("swing_mode_shape", &swing_mode_shape, py::arg("i"), py::arg("j"), py::arg("params"));

    py::class_<SwingModel, SystemModel>(m, "SwingModel")
        .def(py::init<SwingParameters, std::vector<double>>(), py::arg("params"),
             py::arg("initial_mode_phases") = std::vector<double>{})
        .def("hamiltonian_value", &SwingModel::hamiltonian_value, py::arg("delta"),
             py::arg("omega"), py::arg("t"));

    py::enum_<Scheme>(m, "Scheme")
        .value("rk4", Scheme::rk4)
        .value("symplectic4", Scheme::symplectic4);

    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init([](Scheme scheme, double step, double horizon, long stride) {
                 IntegratorConfig c{scheme, step, horizon, stride};
                 c.validate();
                 return c;
             }),
             py::arg("scheme") = Scheme::rk4, py::arg("step") = 1e-2, py::arg("horizon") = 1.0,
             py::arg("checkpoint_stride") = 0)
        .def_readwrite("scheme", &IntegratorConfig::scheme)
        .def_readwrite("step", &IntegratorConfig::step)
        .def_readwrite("horizon", &IntegratorConfig::horizon)
        .def_readwrite("checkpoint_stride", &IntegratorConfig::checkpoint_stride)
        .def("step_count", &IntegratorConfig::step_count);

    py::class_<EscapePredicate>(m, "EscapePredicate")
        .def(py::init([](int coordinate, double threshold, int consecutive_steps) {
                 EscapePredicate e{coordinate, threshold, consecutive_steps};
                 e.validate();
                 return e;
             }),
             py::arg("coordinate") = 1, py::arg("threshold") = 0.5,
             py::arg("consecutive_steps") = 10)
        .def_readwrite("coordinate", &EscapePredicate::coordinate)
        .def_readwrite("threshold", &EscapePredicate::threshold)
        .def_readwrite("consecutive_steps", &EscapePredicate::consecutive_steps);

    py::class_<Checkpoint>(m, "Checkpoint")
        .def_readonly("time", &Checkpoint::time)
        .def_readonly("partial_average", &Checkpoint::partial_average);

    py::class_<AverageAccumulator>(m, "AverageAccumulator")
        .def(py::init<double, long, double>(), py::arg("step"), py::arg("checkpoint_stride"),
             py::arg("initial_value"))
        .def("accumulate", &AverageAccumulator::accumulate)
        .def("partial_average", &AverageAccumulator::partial_average)
        .def("convergence_gap", &AverageAccumulator::convergence_gap)
        .def_property_readonly("steps", &AverageAccumulator::steps)
        .def_property_readonly("escaped", [](const AverageAccumulator& a) {
            return a.status() == AccumulatorStatus::escaped;
        })
        .def_property_readonly("checkpoints", &AverageAccumulator::checkpoints);

    py::class_<TrajectoryResult>(m, "TrajectoryResult")
        .def_readonly("final_state", &TrajectoryResult::final_state)
        .def_readonly("steps_completed", &TrajectoryResult::steps_completed)
        .def_readonly("windings", &TrajectoryResult::windings)
        .def_property_readonly("escaped", &TrajectoryResult::escaped)
        .def_property_readonly("averages", [](const TrajectoryResult& r) {
            std::vector<double> out;
            for (const auto& acc : r.averages) {
                out.push_back(acc.partial_average());
            }
            return out;
        });

    m.def(
        "integrate",
        [](const SystemModel& model, std::vector<double> ic, const IntegratorConfig& config,
           const std::vector<std::string>& observables,
           std::optional<EscapePredicate> escape) {
            const auto obs = resolve_observables(observables);
            return integrate(model, ic, config, obs, escape ? &*escape : nullptr);
        },
        py::arg("model"), py::arg("ic"), py::arg("config"),
        py::arg("observables") = std::vector<std::string>{},
        py::arg("escape") = std::nullopt);

    py::enum_<CoordinateTopology>(m, "Topology")
        .value("line", CoordinateTopology::line)
        .value("circle", CoordinateTopology::circle);

    py::class_<AxisSpec>(m, "AxisSpec")
        .def(py::init([](int coordinate, double lo, double hi, int samples,
                         CoordinateTopology topology) {
                 return AxisSpec{coordinate, lo, hi, samples, topology};
             }),
             py::arg("coordinate"), py::arg("lo"), py::arg("hi"), py::arg("samples"),
             py::arg("topology") = CoordinateTopology::line);

    py::class_<ScanDomain>(m, "ScanDomain")
        .def(py::init([](AxisSpec axis0, AxisSpec axis1,
                         std::vector<std::pair<int, double>> fixed,
                         std::vector<double> theta0) {
                 ScanDomain d;
                 d.axes = {axis0, axis1};
                 d.fixed = std::move(fixed);
                 d.initial_phase = std::move(theta0);
                 return d;
             }),
             py::arg("axis0"), py::arg("axis1"),
             py::arg("fixed") = std::vector<std::pair<int, double>>{},
             py::arg("theta0") = std::vector<double>{})
        .def("axis_value", &ScanDomain::axis_value);

    py::enum_<CellState>(m, "CellState")
        .value("value", CellState::value)
        .value("escaped", CellState::escaped)
        .value("non_convergent", CellState::non_convergent);

    py::class_<TimeAverageField>(m, "TimeAverageField")
        .def_property_readonly("observable_id", &TimeAverageField::observable_id)
        .def_property_readonly("n1", &TimeAverageField::n1)
        .def_property_readonly("n2", &TimeAverageField::n2)
        .def("state", [](const TimeAverageField& f, int i, int k) { return f.state(i, k); })
        .def("value", [](const TimeAverageField& f, int i, int k) { return f.value(i, k); })
        .def("gap", [](const TimeAverageField& f, int i, int k) { return f.gap(i, k); })
        .def("value_range", &TimeAverageField::value_range)
        .def("values",
             [](const TimeAverageField& f) {
                 std::vector<std::vector<double>> rows(f.n1(), std::vector<double>(f.n2()));
                 for (int i = 0; i < f.n1(); ++i) {
                     for (int k = 0; k < f.n2(); ++k) {
                         rows[i][k] = f.value(i, k);
                     }
                 }
                 return rows;
             })
        .def("escaped_mask", [](const TimeAverageField& f) {
            std::vector<std::vector<bool>> rows(f.n1(), std::vector<bool>(f.n2()));
            for (int i = 0; i < f.n1(); ++i) {
                for (int k = 0; k < f.n2(); ++k) {
                    rows[i][k] = f.state(i, k) == CellState::escaped;
                }
            }
            return rows;
        });

    m.def(
        "sweep",
        [](const SystemModel& model, const ScanDomain& domain,
           const std::vector<std::string>& observables, const IntegratorConfig& config,
           std::optional<EscapePredicate> escape, int threads) {
            const auto obs = resolve_observables(observables);
            SweepOptions options;
            options.threads = threads;
            py::gil_scoped_release release;
            return sweep(model, domain, obs, config, escape, options);
        },
        py::arg("model"), py::arg("domain"), py::arg("observables"), py::arg("config"),
        py::arg("escape") = std::nullopt, py::arg("threads") = 0);

    py::class_<PartitionField>(m, "PartitionField")
        .def_readonly("observable_ids", &PartitionField::observable_ids)
        .def_readonly("bin_widths", &PartitionField::bin_widths)
        .def_readonly("origins", &PartitionField::origins)
        .def_readonly("labels", &PartitionField::labels)
        .def_readonly("label_bins", &PartitionField::label_bins)
        .def_property_readonly("n1", &PartitionField::n1)
        .def_property_readonly("n2", &PartitionField::n2)
        .def("label", [](const PartitionField& p, int i, int k) {
            return p.labels[p.index(i, k)];
        });

    m.def(
        "joint_level_sets",
        [](const std::vector<TimeAverageField>& fields, const std::vector<double>& eps) {
            return joint_level_sets(fields, eps);
        },
        py::arg("fields"), py::arg("eps") = std::vector<double>{});

    py::enum_<Verdict>(m, "Verdict")
        .value("bounded_slice", Verdict::bounded_slice)
        .value("unbounded", Verdict::unbounded)
        .value("inconclusive_touches_boundary", Verdict::inconclusive_touches_boundary);

    py::class_<LabelReport>(m, "LabelReport")
        .def_readonly("label", &LabelReport::label)
        .def_readonly("bins", &LabelReport::bins)
        .def_readonly("cell_count", &LabelReport::cell_count)
        .def_readonly("verdict", &LabelReport::verdict)
        .def_property_readonly("bbox", [](const LabelReport& r) {
            return std::make_tuple(r.i_min, r.i_max, r.k_min, r.k_max);
        });

    py::class_<BoundednessReport>(m, "BoundednessReport")
        .def_readonly("labels", &BoundednessReport::labels)
        .def_readonly("certification", &BoundednessReport::certification);

    m.def("boundedness_report", &boundedness_report, py::arg("partition"));

    m.def("save_field", &save_field, py::arg("field"), py::arg("path"));
    m.def("load_field", &load_field, py::arg("path"));
    m.def("save_partition", &save_partition, py::arg("partition"), py::arg("path"));
    m.def("load_partition", &load_partition, py::arg("path"));
    m.def("render_file", &render_file, py::arg("input"), py::arg("output"));

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("measured", &CheckResult::measured)
        .def_readonly("tolerance", &CheckResult::tolerance)
        .def_readonly("passed", &CheckResult::pass)
        .def_readonly("detail", &CheckResult::detail);

    m.def("verify_harmonic", &verify_harmonic);
    m.def("verify_dissipative", &verify_dissipative);
    m.def("verify_integrator", &verify_integrator);

    m.attr("__version__") = "0.1.0";
}
