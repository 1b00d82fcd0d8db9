// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Invoked as: acceptance <cli-binary> <configs-dir> <scratch-dir>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "scalar1d/analysis.hpp"
#include "scalar1d/config.hpp"
#include "scalar1d/conservation.hpp"
#include "scalar1d/errors.hpp"
#include "scalar1d/picard.hpp"
#include "scalar1d/source_field.hpp"

using namespace scalar1d;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %-22s %s\n", ok ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

std::string g_cli, g_configs, g_scratch;

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig cfg(const std::string& name) { return load_config_file(g_configs + "/" + name); }

Trajectory run(const RunConfig& c, double t_end = 0.0) {
    StepControl ctrl;
    ctrl.abs_tol = ctrl.rel_tol = c.integrator.tolerance;
    ctrl.max_step = c.integrator.max_step;
    return integrate(c.particle, c.radiation, t_end > 0.0 ? t_end : c.integrator.t_end, ctrl);
}

// --------------------------------------------------------------------------

void criterion1_stationary() {
    const RunConfig c = cfg("stationary.json");
    const Trajectory traj = run(c);
    double maxQ = 0.0, maxP = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        maxQ = std::max(maxQ, std::fabs(traj.node(i).Q));
        maxP = std::max(maxP, std::fabs(traj.node(i).p));
    }
    const SourceField field(traj);
    double snap_err = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double x = -10.0 + 20.0 * i / 199.0;
        snap_err = std::max(snap_err, std::fabs(field.u_total(50.0, x) + 0.5 * std::fabs(x)));
    }
    const bool ok = maxQ <= 1e-12 && maxP <= 1e-12 && snap_err <= 1e-10;
    report(1, "stationary exactness",
           ok, fmt("max|Q|=%.2e max|p|=%.2e snapshot_err=%.2e", maxQ, maxP, snap_err));
}

void criterion2_cross_method() {
    const RunConfig c = cfg("gentle.json");
    const CurveSpaceSpec spec = make_curve_space(c.particle, c.radiation, 20.0, 2.0);
    const auto [curve, rep] =
        solve_fixed_point(c.particle, c.radiation, spec, 4096, 1e-9, c.picard.max_iter);
    const Trajectory traj = run(c, 20.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < curve.nodes(); ++i) {
        const ReducedState s = traj.state(curve.time_at(i));
        sup = std::max({sup, std::fabs(curve[i][0] - s.Q), std::fabs(curve[i][1] - s.p),
                        std::fabs(curve[i][2] - s.W)});
    }
    report(2, "cross-method agreement", sup <= 1e-5,
           fmt("sup|picard - rk| = %.3e (tol 1e-5), iterations %.0f", sup,
               double(rep.iterations)));
}

void criterion3_contraction() {
    const std::vector<std::string> names = {"gentle.json", "mixed.json"};
    bool ok = true;
    std::string detail;
    int config_index = 0;
    auto check_one = [&](const ParticleParams& params, const RadiationProfile& profile) {
        const CurveSpaceSpec spec = make_curve_space(params, profile, 20.0, 2.0);
        try {
            const auto [curve, rep] = solve_fixed_point(params, profile, spec, 4096, 1e-9, 40);
            double worst = 0.0;
            for (double r : rep.observed_ratios) worst = std::max(worst, r);
            const bool this_ok = worst <= 0.5 * 1.05 && rep.iterations <= 40;
            ok = ok && this_ok;
            detail += fmt("#%.0f: ratio %.3f iters %.0f  ", double(config_index), worst,
                          double(rep.iterations));
        } catch (const MaxIterExceeded&) {
            ok = false;
            detail += fmt("#%.0f: no convergence in 40  ", double(config_index));
        }
        ++config_index;
    };
    for (const auto& n : names) {
        const RunConfig c = cfg(n);
        check_one(c.particle, c.radiation);
    }
    // third radiation family: bump data on the opposite side
    check_one(ParticleParams{1.0, 1.0},
              RadiationProfile({ProfileComponent{ProfileTarget::V0, ProfileKind::SmoothBump,
                                                 -5.0, 1.5, 0.03},
                                ProfileComponent{ProfileTarget::V1, ProfileKind::PolySpline,
                                                 -5.0, 1.5, -0.02}}));
    report(3, "contraction certificate", ok, detail + "(bound 0.525)");
}

void criterion4_conservation() {
    const RunConfig c = cfg("kick.json");
    const std::vector<double> epsilons = {0.2, 0.1, 0.05, 0.025, 0.0125};
    const Trajectory traj = run(c);
    const SourceField field(traj);
    const double T_exit = radiation_exit_time(traj);
    const double a = c.particle.charge;

    auto raw_at = [](const ConservationReport& rep, double eps) {
        for (const auto& [e, r] : rep.residual_vs_epsilon)
            if (std::fabs(e - eps) < 1e-12) return r;
        return rep.residual_vs_epsilon.back().second;
    };

    bool clean_ok = true;
    std::string detail;
    for (const auto& w : {std::array<double, 2>{0.0, 5.0},
                          std::array<double, 2>{T_exit, T_exit + 5.0}}) {
        const ConservationReport rep = epsilon_study(field, w[0], w[1], epsilons);
        const double scale = std::max({std::fabs(rep.delta_p[0]), std::fabs(rep.delta_p[1]),
                                       a * a * (w[1] - w[0]), c.particle.bare_mass});
        const double extrap = std::max(std::fabs(rep.extrapolated_residual[0]),
                                       std::fabs(rep.extrapolated_residual[1]));
        const double raw = raw_at(rep, 0.025);
        clean_ok = clean_ok && extrap <= 1e-6 * scale && raw <= 1e-3 * scale;
        detail += fmt("extrap/scale=%.2e raw/scale=%.2e  ", extrap / scale, raw / scale);
    }
    report(4, "conservation audit", clean_ok, detail + "(tols 1e-6, 1e-3)");

    // Mutation probe: +1% on the self-force coefficient.
    StepControl ctrl;
    ctrl.abs_tol = ctrl.rel_tol = c.integrator.tolerance;
    ctrl.max_step = c.integrator.max_step;
    ctrl.self_force_scale = 1.01;
    const Trajectory bad = integrate(c.particle, c.radiation, c.integrator.t_end, ctrl);
    const SourceField bad_field(bad);
    double worst_ratio = 0.0;
    for (const auto& w : {std::array<double, 2>{0.0, 5.0},
                          std::array<double, 2>{T_exit, T_exit + 5.0}}) {
        const ConservationReport rep =
            epsilon_study(bad_field, w[0], w[1], {0.1, 0.05, 0.025});
        const double scale = std::max({std::fabs(rep.delta_p[0]), std::fabs(rep.delta_p[1]),
                                       a * a * (w[1] - w[0]), c.particle.bare_mass});
        const double extrap = std::max(std::fabs(rep.extrapolated_residual[0]),
                                       std::fabs(rep.extrapolated_residual[1]));
        worst_ratio = std::max(worst_ratio, extrap / scale);
    }
    // A +1% corruption shifts the balance by (a^2/200) * |dQ| < (a^2/200) * dt,
    // which stays below 1e-2 * scale for every window since scale >= a^2 dt;
    // the stated threshold is not reachable. Reported as measured.
    report(4, "conservation mutation", worst_ratio >= 1e-2,
           fmt("mutated residual/scale = %.3e (stated threshold 1e-2; detection margin "
               "over clean audit tol 1e-6: %.0fx)",
               worst_ratio, worst_ratio / 1e-6));
}

void criterion5_force_jump() {
    const RunConfig c = cfg("kick.json");
    const Trajectory traj = run(c);
    const SourceField field(traj);
    const int n = 50;
    std::vector<Vec2> jumps(n), closed(n);
    double fscale = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = 0.5 + (c.integrator.t_end - 1.0) * i / (n - 1);
        jumps[i] = force_from_jump(field, t);
        closed[i] = force_closed_form(traj, t);
        fscale = std::max({fscale, std::fabs(closed[i][0]), std::fabs(closed[i][1])});
    }
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int nu = 0; nu < 2; ++nu)
            worst = std::max(worst, std::fabs(jumps[i][nu] - closed[i][nu]) /
                                        std::max(std::fabs(closed[i][nu]), 0.01 * fscale));
    const Trajectory stat = run(cfg("stationary.json"));
    const SourceField stat_field(stat);
    const double jump_err = std::fabs(stat_field.worldline_jump(50.0).jump_d1 + 1.0);
    report(5, "force-law jump", worst <= 1e-3 && jump_err <= 1e-6,
           fmt("rel_err=%.2e (tol 1e-3), stationary [d1U]+a = %.2e (tol 1e-6)", worst,
               jump_err));
}

void criterion6_cancellation() {
    const Trajectory traj = run(cfg("gentle.json"));
    const CancellationReport rep = cancellation_check(traj);
    report(6, "cancellation", rep.rate_residual <= 1e-6,
           fmt("max|u0 dW/dt - a/2| = %.3e (tol 1e-6)", rep.rate_residual));
}

void criterion7_mass_bounds() {
    bool ok = true;
    std::string detail;
    for (const char* name : {"gentle.json", "kick.json"}) {
        const RunConfig c = cfg(name);
        const Trajectory traj = run(c);
        const MassBounds mb = mass_bounds_check(traj);
        const double a = c.particle.charge;
        const double sup_V0 = c.radiation.norms().sup_V0;
        double growth_worst = -1e300;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const ReducedState s = traj.node(i);
            const double bound = c.particle.bare_mass + std::fabs(a) * sup_V0 +
                                 (0.5 * a * a + 1e-6) * s.t;
            growth_worst = std::max(growth_worst, traj.kin(s.t).m - bound);
        }
        ok = ok && mb.m_min >= mb.m_V && growth_worst <= 0.0;
        detail += fmt("m_min-m_V=%.2e growth_margin=%.2e  ", mb.m_min - mb.m_V, -growth_worst);
    }
    report(7, "mass bounds", ok, detail);
}

void criterion8_asymptotic_rest() {
    const RunConfig c = cfg("decay.json");
    const Trajectory traj = run(c);  // t_end = 1000
    const double T_exit = radiation_exit_time(traj);
    const DecayFit fit = decay_fit(traj, T_exit);

    // first sampled time after which |u1| stays below 1e-2
    double T_eps = -1.0;
    bool found = false;
    for (double t = 0.0; t <= traj.end_time(); t += 0.25) {
        if (std::fabs(traj.kin(t).u1) >= 1e-2) {
            T_eps = -1.0;
        } else if (T_eps < 0.0) {
            T_eps = t;
            found = true;
        }
    }
    const bool ok = found && fit.slope_residual <= 1e-6 && fit.powerlaw_ok;
    report(8, "asymptotic rest", ok,
           fmt("T_0.01=%.2f slope_res=%.2e (tol 1e-6), exponent a^2/2A=%.2f", T_eps,
               fit.slope_residual, fit.exponent));
}

void criterion9_field_regularity() {
    const RunConfig c = cfg("kick.json");
    const Trajectory traj = run(c);
    const SourceField field(traj);
    const ProfileNorms n = c.radiation.norms();
    const double C = std::fabs(c.particle.charge) + n.sup_d1V0 + n.sup_V1;
    const double phi = 0.6180339887498949, phi2 = 0.7548776662466927;
    double worst = 0.0;
    bool finite = true;
    for (int k = 1; k <= 1000; ++k) {
        const double t = 0.05 + std::fmod(k * phi, 1.0) * (traj.end_time() - 0.1);
        const double x1 = -20.0 + std::fmod(k * phi2, 1.0) * 40.0;
        const double x2 = -20.0 + std::fmod(k * phi2 * phi2, 1.0) * 40.0;
        if (std::fabs(x1 - x2) < 1e-6) continue;
        const double u1 = field.u_total(t, x1), u2 = field.u_total(t, x2);
        if (!std::isfinite(u1) || !std::isfinite(u2)) finite = false;
        worst = std::max(worst, std::fabs(u1 - u2) / std::fabs(x1 - x2));
    }
    report(9, "field regularity", worst <= C && finite,
           fmt("max quotient %.3f vs certified %.3f; all finite", worst, C));
}

void criterion10_determinism() {
    bool ok = true;
    std::string detail;
    for (const char* name : {"stationary", "gentle", "kick", "mixed", "decay", "sweep"}) {
        const std::string cfg_path = g_configs + "/" + name + std::string(".json");
        const std::string o1 = g_scratch + "/det1/" + name;
        const std::string o2 = g_scratch + "/det2/" + name;
        const RunConfig c = load_config_file(cfg_path);
        bool same = true;
        if (run_cli("simulate --config " + cfg_path + " --out " + o1) != 0 ||
            run_cli("simulate --config " + cfg_path + " --out " + o2) != 0)
            same = false;
        else
            same = slurp(o1 + "/trajectory.csv") == slurp(o2 + "/trajectory.csv");
        if (same && !c.verify.snapshot_times.empty()) {
            run_cli("snapshot --config " + cfg_path + " --out " + o1);
            run_cli("snapshot --config " + cfg_path + " --out " + o2);
            for (std::size_t i = 0; i < c.verify.snapshot_times.size(); ++i) {
                const std::string f = "/snapshot_" + std::to_string(i) + ".csv";
                same = same && slurp(o1 + f) == slurp(o2 + f) && !slurp(o1 + f).empty();
            }
        }
        if (same && c.sweep.active()) {
            run_cli("sweep --config " + cfg_path + " --out " + o1);
            run_cli("sweep --config " + cfg_path + " --out " + o2);
            same = slurp(o1 + "/sweep.csv") == slurp(o2 + "/sweep.csv") &&
                   !slurp(o1 + "/sweep.csv").empty();
        }
        if (!same) detail += std::string(name) + " differs! ";
        ok = ok && same;
    }
    // NaN/Inf scan over everything written above
    bool clean = true;
    for (const auto& entry : fs::recursive_directory_iterator(g_scratch)) {
        if (!entry.is_regular_file()) continue;
        const std::string text = slurp(entry.path().string());
        if (text.find("nan") != std::string::npos || text.find("inf") != std::string::npos)
            clean = false;
    }
    report(10, "determinism", ok && clean,
           detail.empty() ? "bit-identical reruns for all shipped configs; outputs finite"
                          : detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::fprintf(stderr, "usage: acceptance <cli> <configs-dir> <scratch-dir>\n");
        return 2;
    }
    g_cli = argv[1];
    g_configs = argv[2];
    g_scratch = argv[3];
    fs::create_directories(g_scratch);

    criterion1_stationary();
    criterion2_cross_method();
    criterion3_contraction();
    criterion4_conservation();
    criterion5_force_jump();
    criterion6_cancellation();
    criterion7_mass_bounds();
    criterion8_asymptotic_rest();
    criterion9_field_regularity();
    criterion10_determinism();

    std::printf("ACCEPTANCE: %s (%d failure%s)\n", g_failures == 0 ? "PASS" : "FAIL",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
