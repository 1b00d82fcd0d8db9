#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scalar1d/analysis.hpp"
#include "scalar1d/config.hpp"
#include "scalar1d/conservation.hpp"
#include "scalar1d/errors.hpp"
#include "scalar1d/picard.hpp"
#include "scalar1d/run.hpp"
#include "scalar1d/source_field.hpp"

namespace py = pybind11;
using namespace scalar1d;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Relativistic scalar point charge coupled to its massless field in 1+1 "
              "dimensions: direct integration, Picard fixed point, field reconstruction "
              "and conservation audits.";

    py::register_exception<SmallnessViolation>(m, "SmallnessViolation");
    py::register_exception<NonpositiveMass>(m, "NonpositiveMass");
    py::register_exception<OutOfRange>(m, "OutOfRangeError");

    py::enum_<ProfileTarget>(m, "ProfileTarget")
        .value("V0", ProfileTarget::V0)
        .value("V1", ProfileTarget::V1);
    py::enum_<ProfileKind>(m, "ProfileKind")
        .value("smooth_bump", ProfileKind::SmoothBump)
        .value("poly_spline", ProfileKind::PolySpline);
    py::enum_<Side>(m, "Side")
        .value("left", Side::Left)
        .value("right", Side::Right)
        .value("away", Side::Away);

    py::class_<ProfileComponent>(m, "ProfileComponent")
        .def(py::init([](ProfileTarget target, ProfileKind kind, double center,
                         double half_width, double amplitude) {
                 return ProfileComponent{target, kind, center, half_width, amplitude};
             }),
             py::arg("target"), py::arg("kind"), py::arg("center"), py::arg("half_width"),
             py::arg("amplitude"))
        .def_readwrite("target", &ProfileComponent::target)
        .def_readwrite("kind", &ProfileComponent::kind)
        .def_readwrite("center", &ProfileComponent::center)
        .def_readwrite("half_width", &ProfileComponent::half_width)
        .def_readwrite("amplitude", &ProfileComponent::amplitude);

    py::class_<ProfileNorms>(m, "ProfileNorms")
        .def_readonly("sup_V0", &ProfileNorms::sup_V0)
        .def_readonly("L1_V1", &ProfileNorms::L1_V1)
        .def_readonly("sup_d1V0", &ProfileNorms::sup_d1V0)
        .def_readonly("sup_V1", &ProfileNorms::sup_V1)
        .def_readonly("lip_d1V", &ProfileNorms::lip_d1V);

    py::class_<RadiationProfile>(m, "RadiationProfile")
        .def(py::init<>())
        .def(py::init<std::vector<ProfileComponent>>(), py::arg("components"))
        .def("value", &RadiationProfile::value, py::arg("target"), py::arg("x"))
        .def("derivative", &RadiationProfile::derivative, py::arg("target"), py::arg("x"))
        .def("antiderivative", &RadiationProfile::antiderivative, py::arg("target"), py::arg("x"))
        .def("norms", &RadiationProfile::norms)
        .def("support_bounds",
             [](const RadiationProfile& p) -> py::object {
                 const auto b = p.support_bounds();
                 if (!b) return py::none();
                 return py::make_tuple(b->lo, b->hi);
             })
        .def_property_readonly("empty", &RadiationProfile::empty);

    py::class_<ParticleParams>(m, "ParticleParams")
        .def(py::init([](double bare_mass, double charge) {
                 ParticleParams p{bare_mass, charge};
                 p.validate();
                 return p;
             }),
             py::arg("bare_mass"), py::arg("charge"))
        .def_readonly("bare_mass", &ParticleParams::bare_mass)
        .def_readonly("charge", &ParticleParams::charge);

    py::class_<SmallnessReport>(m, "SmallnessReport")
        .def_readonly("m_V", &SmallnessReport::m_V)
        .def_readonly("ok", &SmallnessReport::ok);
    m.def("smallness_check", &smallness_check, py::arg("params"), py::arg("profile"));

    m.def("eval_V", &eval_V, py::arg("profile"), py::arg("t"), py::arg("x"));
    m.def("eval_U_stat", &eval_U_stat, py::arg("a"), py::arg("t"), py::arg("x"));
    m.def(
        "eval_grad_V",
        [](const RadiationProfile& p, double t, double x) {
            const FieldGradient g = eval_grad_V(p, t, x);
            return py::make_tuple(g.d0, g.d1);
        },
        py::arg("profile"), py::arg("t"), py::arg("x"));

    py::class_<ReducedState>(m, "ReducedState")
        .def_readonly("t", &ReducedState::t)
        .def_readonly("Q", &ReducedState::Q)
        .def_readonly("p", &ReducedState::p)
        .def_readonly("W", &ReducedState::W);
    py::class_<Kinematics>(m, "Kinematics")
        .def_readonly("v", &Kinematics::v)
        .def_readonly("u0", &Kinematics::u0)
        .def_readonly("u1", &Kinematics::u1)
        .def_readonly("m", &Kinematics::m);

    py::class_<Trajectory>(m, "Trajectory")
        .def("state", &Trajectory::state, py::arg("t"))
        .def("kin", &Trajectory::kin, py::arg("t"))
        .def_property_readonly("end_time", &Trajectory::end_time)
        .def_property_readonly("steps", &Trajectory::size)
        .def_property_readonly("interp_error_bound", &Trajectory::interp_error_bound);

    m.def(
        "integrate",
        [](const ParticleParams& params, const RadiationProfile& profile, double t_end,
           double tolerance, double max_step) {
            StepControl ctrl;
            ctrl.abs_tol = ctrl.rel_tol = tolerance;
            ctrl.max_step = max_step;
            return integrate(params, profile, t_end, ctrl);
        },
        py::arg("params"), py::arg("profile"), py::arg("t_end"), py::arg("tolerance") = 1e-10,
        py::arg("max_step") = 0.02);

    m.def("dynamical_mass", &dynamical_mass, py::arg("params"), py::arg("profile"),
          py::arg("t"), py::arg("Q"), py::arg("W"));
    m.def("lipschitz_estimate", &lipschitz_estimate, py::arg("params"), py::arg("profile"));

    py::class_<ContractionReport>(m, "ContractionReport")
        .def_readonly("L_est", &ContractionReport::L_est)
        .def_readonly("gamma", &ContractionReport::gamma)
        .def_readonly("ratio_bound", &ContractionReport::ratio_bound)
        .def_readonly("observed_ratios", &ContractionReport::observed_ratios)
        .def_readonly("iterations", &ContractionReport::iterations)
        .def_readonly("final_residual", &ContractionReport::final_residual);

    m.def(
        "solve_fixed_point",
        [](const ParticleParams& params, const RadiationProfile& profile, double horizon,
           double gamma_factor, std::size_t grid_nodes, double tol, int max_iter) {
            const CurveSpaceSpec spec = make_curve_space(params, profile, horizon, gamma_factor);
            auto [curve, report] = solve_fixed_point(params, profile, spec, grid_nodes, tol,
                                                     max_iter);
            std::vector<double> ts(curve.nodes());
            std::vector<std::array<double, 3>> vals(curve.nodes());
            for (std::size_t i = 0; i < curve.nodes(); ++i) {
                ts[i] = curve.time_at(i);
                vals[i] = curve[i];
            }
            return py::make_tuple(ts, vals, report);
        },
        py::arg("params"), py::arg("profile"), py::arg("horizon"), py::arg("gamma_factor") = 2.0,
        py::arg("grid_nodes") = 4096, py::arg("tol") = 1e-9, py::arg("max_iter") = 60);

    py::class_<SourceField>(m, "SourceField")
        .def(py::init<const Trajectory&>(), py::arg("trajectory"), py::keep_alive<1, 2>())
        .def("u_source", &SourceField::u_source, py::arg("t"), py::arg("x"))
        .def("u_total", &SourceField::u_total, py::arg("t"), py::arg("x"))
        .def(
            "grad_total",
            [](const SourceField& f, double t, double x, std::optional<Side> side) {
                const FieldGradient g = f.grad_total(t, x, side);
                return py::make_tuple(g.d0, g.d1);
            },
            py::arg("t"), py::arg("x"), py::arg("side") = std::nullopt)
        .def("worldline_jump", [](const SourceField& f, double t) {
            const WorldlineJump j = f.worldline_jump(t);
            return py::make_tuple(j.jump_d0, j.jump_d1);
        });

    m.def(
        "tube_flux",
        [](const SourceField& field, double t1, double t2, double epsilon, double quad_tol) {
            const ConservationReport r = tube_flux(field, t1, t2, epsilon, quad_tol);
            py::dict d;
            d["epsilon"] = r.epsilon;
            d["delta_p"] = r.delta_p;
            d["residual"] = r.residual;
            d["tube_residual"] = r.tube_residual;
            d["flux_left"] = r.flux_left;
            d["flux_right"] = r.flux_right;
            d["flux_cap_lo"] = r.flux_cap_lo;
            d["flux_cap_hi"] = r.flux_cap_hi;
            return d;
        },
        py::arg("field"), py::arg("t1"), py::arg("t2"), py::arg("epsilon"),
        py::arg("quad_tol") = 1e-10);

    m.def("force_from_jump", &force_from_jump, py::arg("field"), py::arg("t"));
    m.def("force_closed_form", &force_closed_form, py::arg("trajectory"), py::arg("t"));
    m.def("radiation_exit_time", &radiation_exit_time, py::arg("trajectory"));

    py::class_<CancellationReport>(m, "CancellationReport")
        .def_readonly("rate_residual", &CancellationReport::rate_residual)
        .def_readonly("accel_residual", &CancellationReport::accel_residual);
    m.def("cancellation_check", &cancellation_check, py::arg("trajectory"));

    py::class_<MassBounds>(m, "MassBounds")
        .def_readonly("m_min", &MassBounds::m_min)
        .def_readonly("m_V", &MassBounds::m_V)
        .def_readonly("A_fit", &MassBounds::A_fit)
        .def_readonly("v_max", &MassBounds::v_max);
    m.def("mass_bounds_check", &mass_bounds_check, py::arg("trajectory"));

    py::class_<DecayFit>(m, "DecayFit")
        .def_readonly("slope_residual", &DecayFit::slope_residual)
        .def_readonly("powerlaw_ok", &DecayFit::powerlaw_ok)
        .def_readonly("A_bound", &DecayFit::A_bound)
        .def_readonly("exponent", &DecayFit::exponent)
        .def_readonly("regression_slope", &DecayFit::regression_slope);
    m.def("decay_fit", &decay_fit, py::arg("trajectory"), py::arg("T_exit"));

    m.def("load_config", &load_config_file, py::arg("path"));
    py::class_<RunConfig>(m, "RunConfig");
    m.def(
        "run_simulate",
        [](const RunConfig& cfg, const std::string& out_dir) {
            RunOptions opts;
            opts.out_dir_override = out_dir;
            return cmd_simulate(cfg, opts);
        },
        py::arg("config"), py::arg("out_dir") = std::string());
}
