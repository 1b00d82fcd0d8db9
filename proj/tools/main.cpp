#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scalar1d/errors.hpp"
#include "scalar1d/run.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    bool seedless = false;
    bool corrupt_self_force = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "path to the JSON run configuration")
        ->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
    cmd->add_flag("--seedless", args.seedless,
                  "assert that no random number generator is linked (always true; all "
                  "sampling in this tool is deterministic)");
#ifdef SCALAR1D_TEST_FEATURES
    cmd->add_flag("--corrupt-self-force", args.corrupt_self_force)->group("");  // hidden
#endif
}

int dispatch(const std::string& name, const CommonArgs& args) {
    const scalar1d::RunConfig cfg = scalar1d::load_config_file(args.config_path);
    scalar1d::RunOptions opts;
    opts.out_dir_override = args.out_dir;
    opts.corrupt_self_force = args.corrupt_self_force;
    if (args.seedless)
        std::cout << "seedless: no RNG linked; all sampling is deterministic\n";
    if (name == "simulate") return scalar1d::cmd_simulate(cfg, opts);
    if (name == "verify") return scalar1d::cmd_verify(cfg, opts);
    if (name == "snapshot") return scalar1d::cmd_snapshot(cfg, opts);
    if (name == "sweep") return scalar1d::cmd_sweep(cfg, opts);
    return scalar1d::kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scalar1d: joint evolution of a relativistic scalar point charge and its "
                 "massless field in 1+1 dimensions"};
    app.require_subcommand(1);

    CommonArgs args;
    const char* names[] = {"simulate", "verify", "snapshot", "sweep"};
    const char* descs[] = {
        "integrate the reduced system and write trajectory.csv",
        "run the conservation, cancellation, decay and cross-method audits",
        "export field snapshots on a spatial grid",
        "run a parameter sweep and write one summary row per point"};
    for (int i = 0; i < 4; ++i) add_common(app.add_subcommand(names[i], descs[i]), args);

    CLI11_PARSE(app, argc, argv);

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        return dispatch(sub, args);
    } catch (const scalar1d::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return scalar1d::kExitConfig;
    } catch (const scalar1d::SmallnessViolation& e) {
        std::cerr << "smallness violation: " << e.what() << "\n";
        return scalar1d::kExitSmallness;
    } catch (const scalar1d::NonpositiveMass& e) {
        std::cerr << "integrator fault: " << e.what() << "\n";
        return scalar1d::kExitIntegrator;
    } catch (const scalar1d::StepUnderflow& e) {
        std::cerr << "integrator fault: " << e.what() << "\n";
        return scalar1d::kExitIntegrator;
    } catch (const scalar1d::OutOfRange& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return scalar1d::kExitIntegrator;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return scalar1d::kExitIntegrator;
    }
}
