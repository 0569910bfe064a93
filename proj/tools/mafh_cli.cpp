#include "commands.hpp"

#include "mafh/error.hpp"
#include "mafh/parallel.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace mafh::cli;

namespace {

void add_common(CLI::App* sub, Manifest& m)
{
    sub->add_option("--config", m.config_path, "JSON config file (flat keys)")->check(CLI::ExistingFile);
    sub->add_option("--out", m.output_dir, "output directory");
    sub->add_option("--set", m.overrides, "override a config key, key=value (repeatable)");
}

// Flags that are plain config fields become overrides.
void add_field(CLI::App* sub, Manifest& m, const std::string& flag, const std::string& key, const std::string& help,
               bool as_list = false)
{
    sub->add_option_function<std::string>(
        flag,
        [&m, key, as_list](const std::string& v) { m.overrides.push_back(key + "=" + (as_list ? "[" + v + "]" : v)); },
        help);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Movable-antenna frequency-hopping MIMO radar: ambiguity, bounds, layout optimization"};
    app.require_subcommand(1);
    Manifest m;

    AfFlags af;
    auto* af_cmd = app.add_subcommand("af", "ambiguity function slice");
    add_common(af_cmd, m);
    add_field(af_cmd, m, "--seed", "seed", "FH code seed");
    af_cmd->add_option("--axis", af.axis, "angular | doppler | delay")->required()
        ->check(CLI::IsMember({"angular", "doppler", "delay"}));
    af_cmd->add_option("--layout", af.layout, "equidistant | mmlwd | file:PATH");
    af_cmd->add_option("--theta", af.theta, "target angle (rad)");
    af_cmd->add_option("--points", af.points, "samples along the axis");
    auto* lo = af_cmd->add_option("--lo", af.lo, "axis start (rad | Hz | s)");
    auto* hi = af_cmd->add_option("--hi", af.hi, "axis end (rad | Hz | s)");
    lo->needs(hi);
    hi->needs(lo);

    TheoryFlags th;
    auto* th_cmd = app.add_subcommand("theory", "main lobe width and sidelobe bounds");
    add_common(th_cmd, m);
    add_field(th_cmd, m, "--seed", "seed", "FH code seed");
    add_field(th_cmd, m, "--L", "L", "aperture budget (wavelengths)");
    th_cmd->add_option("--sweep", th.sweep, "L | Mt | theta")->check(CLI::IsMember({"L", "Mt", "theta"}));
    th_cmd->add_option("--bound", th.bound, "doppler | delay")->check(CLI::IsMember({"doppler", "delay"}));
    th_cmd->add_option("--Mt", th.Mt, "number of transmit antennas");
    th_cmd->add_option("--theta", th.theta, "angle (rad)");
    th_cmd->add_option("--tau-max", th.tau_max, "delay half-range (s)");
    th_cmd->add_option("--v-max", th.v_max, "Doppler half-range (Hz)");
    th_cmd->add_option("--points", th.points, "samples along the bound axis");

    OptimizeFlags op;
    auto* op_cmd = app.add_subcommand("optimize", "optimize the antenna layout");
    add_common(op_cmd, m);
    add_field(op_cmd, m, "--seed", "seed", "seed for the FH code, random starts and the GA");
    add_field(op_cmd, m, "--alpha", "alpha", "weights a1,a2,a3 summing to 1", true);
    add_field(op_cmd, m, "--starts", "starts", "RGPM multi-start count");
    op_cmd->add_option("--method", op.method, "rgpm | ga")->check(CLI::IsMember({"rgpm", "ga"}));

    TradeoffFlags tr;
    auto* tr_cmd = app.add_subcommand("tradeoff", "optimize over a simplex grid of weights");
    add_common(tr_cmd, m);
    add_field(tr_cmd, m, "--seed", "seed", "seed");
    add_field(tr_cmd, m, "--starts", "starts", "RGPM multi-start count");
    tr_cmd->add_option("--resolution", tr.resolution, "simplex resolution");

    DetectFlags de;
    auto* de_cmd = app.add_subcommand("detect", "Monte Carlo detection curves");
    add_common(de_cmd, m);
    add_field(de_cmd, m, "--seed", "seed", "seed");
    add_field(de_cmd, m, "--pfa", "P_fa", "false-alarm probability");
    add_field(de_cmd, m, "--trials", "trials", "noise-only calibration trials");
    add_field(de_cmd, m, "--alpha", "alpha", "weights used for the optimized layout", true);
    de_cmd->add_option("--snr", de.snr, "SNR grid from:to:step (dB)");
    de_cmd->add_option("--layouts", de.layouts, "comma list of equidistant, mmlwd, optimized, file:PATH");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        mafh::configure_threads_from_env();
        if (af_cmd->parsed()) {
            m.command = "af";
            af.range_set = lo->count() > 0;
            return cmd_af(m, af);
        }
        if (th_cmd->parsed()) {
            m.command = "theory";
            return cmd_theory(m, th);
        }
        if (op_cmd->parsed()) {
            m.command = "optimize";
            return cmd_optimize(m, op);
        }
        if (tr_cmd->parsed()) {
            m.command = "tradeoff";
            return cmd_tradeoff(m, tr);
        }
        if (de_cmd->parsed()) {
            m.command = "detect";
            return cmd_detect(m, de);
        }
    } catch (const mafh::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
