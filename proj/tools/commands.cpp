#include "commands.hpp"

#include "mafh/detection.hpp"
#include "mafh/error.hpp"
#include "mafh/ga.hpp"
#include "mafh/metrics.hpp"
#include "mafh/rgpm.hpp"
#include "mafh/theory.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mafh::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Context {
    RunConfig cfg;
    json cfg_json;
    OutputMeta meta;
    fs::path out;
    FhCode code;
};

Context load(const Manifest& m)
{
    json j = effective_config_json(m);
    RunConfig cfg = run_config_from_json(j);
    j = to_json(cfg);
    fs::create_directories(m.output_dir);
    require(fs::is_directory(m.output_dir), "output directory is not writable: " + m.output_dir);
    OutputMeta meta{m.command, config_hash(j), cfg.seed, kNormalization};
    FhCode code = generate_fh_code(cfg.radar, cfg.M_t, cfg.seed);
    return {cfg, j, meta, fs::path(m.output_dir), code};
}

std::string path_in(const Context& c, const std::string& name)
{
    return (c.out / name).string();
}

AntennaLayout named_layout(const std::string& name, const RunConfig& cfg)
{
    if (name == "equidistant") return equidistant_layout(cfg.M_t, cfg.L);
    if (name == "mmlwd") return mmlwd_layout(cfg.M_t, cfg.L);
    if (name.rfind("file:", 0) == 0) {
        std::ifstream in(name.substr(5));
        require(in.good(), "cannot read layout file " + name.substr(5));
        json j = json::parse(in, nullptr, false);
        require(!j.is_discarded(), "layout file is not valid JSON: " + name.substr(5));
        AntennaLayout l = layout_from_json(j.contains("layout") ? j.at("layout") : j);
        require(l.num_antennas() == cfg.M_t, "layout file has a different M_t than the config");
        return l;
    }
    throw Error("unknown layout '" + name + "' (expected equidistant, mmlwd or file:PATH)");
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double magnitude_db(double mag, double peak)
{
    if (mag <= 0.0) return -300.0;
    return std::max(-300.0, 20.0 * std::log10(mag / peak));
}

json terms_json(const ObjectiveTerms& t)
{
    return {{"f1", t.f1}, {"f2", t.f2}, {"f3", t.f3}, {"f", t.f}};
}

json grid_json(const ObjectiveGrid& g)
{
    return {{"n1", g.n1}, {"n2", g.n2}, {"n3", g.n3}};
}

void write_trace(const Context& c, const std::string& name, const RgpmResult& r)
{
    CsvWriter csv(path_in(c, name), c.meta, {"k", "f", "grad_norm", "active_count", "omega"});
    for (const auto& row : r.trace)
        csv.row({std::to_string(row.k), format_double(row.f), format_double(row.grad_norm),
                 std::to_string(row.active_count), format_double(row.omega)});
}

MultistartResult run_rgpm(const Context& c, const Objective& obj, const std::vector<double>* warm = nullptr)
{
    auto starts = default_starts(c.cfg.M_t, c.cfg.L, c.cfg.starts, c.cfg.seed + 1);
    if (warm != nullptr) starts.emplace_back("warm", *warm);
    return rgpm_multistart(obj, FeasiblePolytope::make(c.cfg.M_t, c.cfg.L), starts, c.cfg.rgpm);
}

ObjectiveGrid grid_for(const RunConfig& cfg)
{
    return build_grid(cfg.radar, cfg.M_t, cfg.L, cfg.alpha, cfg.theta_eval, cfg.theta_mode);
}

} // namespace

json effective_config_json(const Manifest& m)
{
    json j = to_json(RunConfig{});
    if (!m.config_path.empty()) {
        std::ifstream in(m.config_path);
        require(in.good(), "cannot read config file " + m.config_path);
        json file = json::parse(in, nullptr, false);
        require(!file.is_discarded() && file.is_object(), "config file is not a JSON object: " + m.config_path);
        for (const auto& item : file.items()) j[item.key()] = item.value();
    }
    for (const auto& o : m.overrides) apply_override(j, o);
    return j;
}

std::vector<double> parse_range(const std::string& spec)
{
    const auto parts = split(spec, ':');
    require(parts.size() == 3, "range must look like from:to:step, got '" + spec + "'");
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
    try {
        from = std::stod(parts[0]);
        to = std::stod(parts[1]);
        step = std::stod(parts[2]);
    } catch (const std::exception&) {
        throw Error("range must look like from:to:step, got '" + spec + "'");
    }
    require(step > 0.0 && to >= from, "range needs step > 0 and to >= from");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(from + static_cast<double>(i) * step);
    return out;
}

int cmd_af(const Manifest& m, const AfFlags& f)
{
    const Context c = load(m);
    const SliceAxis axis = slice_axis_from_string(f.axis);
    require(f.points >= 3, "--points must be at least 3");
    require(std::abs(f.theta) <= kPi / 2.0, "--theta must lie in [-pi/2, pi/2]");
    const AntennaLayout layout = named_layout(f.layout, c.cfg);
    const auto& r = c.cfg.radar;

    double lo = -kPi / 2.0;
    double hi = kPi / 2.0;
    if (axis == SliceAxis::doppler) {
        lo = -r.f_max;
        hi = r.f_max;
    } else if (axis == SliceAxis::delay) {
        lo = -r.Q * r.delta_t;
        hi = r.Q * r.delta_t;
    }
    if (f.range_set) {
        lo = f.lo;
        hi = f.hi;
    }
    const AmbiguityQuery fixed{0.0, 0.0, f.theta, f.theta};
    const AmbiguitySlice s = slice(axis, fixed, lo, hi, f.points, layout, c.code, r);

    const std::string stem = "af_" + to_string(axis);
    const double peak = static_cast<double>(layout.num_antennas());
    CsvWriter csv(path_in(c, stem + ".csv"), c.meta, {"coord", "magnitude", "magnitude_db"});
    for (std::size_t i = 0; i < s.coords.size(); ++i)
        csv.row({s.coords[i], s.values[i], magnitude_db(s.values[i], peak)});

    json body{{"axis", to_string(axis)},
              {"units", axis == SliceAxis::angular ? "rad" : axis == SliceAxis::doppler ? "Hz" : "s"},
              {"layout", layout_to_json(layout.spacings(), layout.aperture_budget())},
              {"code", c.code.rows()},
              {"fixed", {{"tau", 0.0}, {"v", 0.0}, {"theta", f.theta}, {"theta_p", f.theta}}},
              {"config", c.cfg_json}};
    try {
        const LobeReport rep = lobe_report(s);
        body["lobe"] = {{"main_lobe_width", rep.main_lobe_width}, {"psl_db", rep.psl_db},
                        {"peak_value", rep.peak_value},       {"left_null", rep.left_null},
                        {"right_null", rep.right_null}};
    } catch (const Error& e) {
        body["lobe"] = {{"error", e.what()}};
    }
    write_json(path_in(c, stem + ".json"), c.meta, body);
    std::cout << "wrote " << path_in(c, stem + ".csv") << '\n';
    return 0;
}

int cmd_theory(const Manifest& m, const TheoryFlags& f)
{
    const Context c = load(m);
    require(f.sweep.empty() != f.bound.empty(), "theory needs exactly one of --sweep or --bound");
    const int Mt = f.Mt > 0 ? f.Mt : c.cfg.M_t;

    if (!f.sweep.empty()) {
        const std::string name = "theory_sweep_" + f.sweep + ".csv";
        CsvWriter csv(path_in(c, name), c.meta, {"M_t", "L", "theta", "b_min", "status"});
        auto emit = [&](int M, double L, double th) {
            try {
                csv.row({std::to_string(M), format_double(L), format_double(th), format_double(b_min(M, L, th)), "ok"});
            } catch (const Error&) {
                csv.row({std::to_string(M), format_double(L), format_double(th), "nan", "lobe_exceeds_visible_region"});
            }
        };
        if (f.sweep == "L") {
            for (double L = 0.5 * (Mt - 1) + 0.5; L <= 20.0 + 1e-9; L += 0.5) emit(Mt, L, f.theta);
        } else if (f.sweep == "Mt") {
            for (int M = 2; 0.5 * (M - 1) <= c.cfg.L + 1e-12; ++M) emit(M, c.cfg.L, f.theta);
        } else if (f.sweep == "theta") {
            for (int i = 0; i <= 90; ++i) emit(Mt, c.cfg.L, -kPi / 2.0 + kPi * i / 90.0);
        } else {
            throw Error("--sweep must be L, Mt or theta");
        }
        std::cout << "wrote " << path_in(c, name) << '\n';
        return 0;
    }

    require(f.points >= 2, "--points must be at least 2");
    const auto& r = c.cfg.radar;
    FhCode code = Mt == c.cfg.M_t ? c.code : generate_fh_code(r, Mt, c.cfg.seed);
    std::vector<double> grid;
    TheoryBound bound;
    if (f.bound == "doppler") {
        const double vmax = f.v_max > 0.0 ? f.v_max : r.f_max;
        for (int i = 0; i < f.points; ++i) grid.push_back(-vmax + 2.0 * vmax * i / (f.points - 1));
        if (f.points % 2 == 0) grid.push_back(0.0);
        std::sort(grid.begin(), grid.end());
        bound = doppler_lower_bound(grid, code, r, f.theta);
    } else if (f.bound == "delay") {
        const double tmax = f.tau_max > 0.0 ? f.tau_max : r.Q * r.delta_t;
        for (int i = 0; i < f.points; ++i) grid.push_back(-tmax + 2.0 * tmax * i / (f.points - 1));
        if (f.points % 2 == 0) grid.push_back(0.0);
        std::sort(grid.begin(), grid.end());
        bound = delay_lower_bound(grid, code, r, f.theta);
    } else {
        throw Error("--bound must be doppler or delay");
    }
    const std::string name = "theory_bound_" + f.bound + ".csv";
    CsvWriter csv(path_in(c, name), c.meta, {f.bound == "doppler" ? "v" : "tau", "lower_bound"});
    for (std::size_t i = 0; i < bound.coords.size(); ++i) csv.row({bound.coords[i], bound.lower[i]});
    if (bound.uninformative) std::cerr << "note: bounds carry no information at theta = 0\n";
    std::cout << "wrote " << path_in(c, name) << '\n';
    return 0;
}

int cmd_optimize(const Manifest& m, const OptimizeFlags& f)
{
    const Context c = load(m);
    require(f.method == "rgpm" || f.method == "ga", "--method must be rgpm or ga");
    const ObjectiveGrid grid = grid_for(c.cfg);
    const Objective obj(grid, c.code, c.cfg.radar);
    const auto equi = equidistant_layout(c.cfg.M_t, c.cfg.L);
    const auto mml = mmlwd_layout(c.cfg.M_t, c.cfg.L);

    const MultistartResult ms = run_rgpm(c, obj);
    const RgpmResult& best = ms.best_result();
    for (const auto& run : ms.runs) write_trace(c, "trace_" + run.label + ".csv", run.result);

    json summary{{"method", f.method},
                 {"alpha", c.cfg.alpha},
                 {"grid", grid_json(grid)},
                 {"equidistant", terms_json(obj.terms(equi.spacings()))},
                 {"mmlwd", terms_json(obj.terms(mml.spacings()))},
                 {"config", c.cfg_json}};
    json starts = json::array();
    for (const auto& run : ms.runs)
        starts.push_back({{"label", run.label},
                          {"f", run.result.f},
                          {"iterations", run.result.trace.size() - 1},
                          {"converged", run.result.converged},
                          {"stalled", run.result.stalled}});
    summary["rgpm"] = {{"best_start", ms.runs[ms.best].label},
                       {"terms", terms_json(obj.terms(best.spacings))},
                       {"converged", best.converged},
                       {"stalled", best.stalled},
                       {"starts", starts}};

    std::vector<double> final_spacings = best.spacings;
    if (f.method == "ga") {
        const auto ga = ga_optimize(obj, FeasiblePolytope::make(c.cfg.M_t, c.cfg.L), c.cfg.ga);
        CsvWriter csv(path_in(c, "ga_trace.csv"), c.meta, {"generation", "best_f"});
        for (std::size_t g = 0; g < ga.best_trace.size(); ++g)
            csv.row({std::to_string(g), format_double(ga.best_trace[g])});
        summary["ga"] = {{"terms", terms_json(obj.terms(ga.spacings))},
                         {"generations", c.cfg.ga.G},
                         {"population", c.cfg.ga.N}};
        summary["rgpm_over_ga"] = best.f / ga.f;
        final_spacings = ga.spacings;
    } else {
        write_trace(c, "trace.csv", best);
    }
    summary["layout"] = layout_to_json(final_spacings, c.cfg.L);
    write_json(path_in(c, "layout.json"), c.meta, {{"layout", layout_to_json(final_spacings, c.cfg.L)}});
    write_json(path_in(c, "summary.json"), c.meta, summary);
    if (best.stalled) std::cerr << "warning: RGPM line search stalled; best-so-far layout reported\n";
    std::cout << "wrote " << path_in(c, "summary.json") << '\n';
    return 0;
}

int cmd_tradeoff(const Manifest& m, const TradeoffFlags& f)
{
    const Context c = load(m);
    require(f.resolution >= 1, "--resolution must be at least 1");
    std::vector<std::string> cols{"alpha1", "alpha2", "alpha3", "f1", "f2", "f3", "f", "converged"};
    for (int i = 1; i < c.cfg.M_t; ++i) cols.push_back("d" + std::to_string(i));
    CsvWriter csv(path_in(c, "tradeoff.csv"), c.meta, cols);
    std::vector<double> f1;
    std::vector<double> f2;
    std::vector<double> f3;
    const int n = f.resolution;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n - i; ++j) {
            RunConfig rc = c.cfg;
            rc.alpha = {static_cast<double>(i) / n, static_cast<double>(j) / n, static_cast<double>(n - i - j) / n};
            const Objective obj(grid_for(rc), c.code, rc.radar);
            Context cc = c;
            cc.cfg = rc;
            const auto ms = run_rgpm(cc, obj);
            const auto& best = ms.best_result();
            const auto t = obj.terms(best.spacings);
            f1.push_back(t.f1);
            f2.push_back(t.f2);
            f3.push_back(t.f3);
            std::vector<std::string> row{format_double(rc.alpha[0]), format_double(rc.alpha[1]),
                                         format_double(rc.alpha[2]), format_double(t.f1),
                                         format_double(t.f2),        format_double(t.f3),
                                         format_double(t.f),         best.converged ? "1" : "0"};
            for (double d : best.spacings) row.push_back(format_double(d));
            csv.row(row);
        }
    }
    json summary{{"resolution", n}, {"rows", f1.size()}, {"config", c.cfg_json}};
    // A constant column (e.g. a fully active budget) has no rank correlation.
    auto rho = [](const std::vector<double>& x, const std::vector<double>& y) -> json {
        try {
            return spearman(x, y);
        } catch (const Error&) {
            return nullptr;
        }
    };
    if (f1.size() >= 2) summary["spearman"] = {{"f1_f3", rho(f1, f3)}, {"f1_f2", rho(f1, f2)}, {"f2_f3", rho(f2, f3)}};
    write_json(path_in(c, "tradeoff.json"), c.meta, summary);
    std::cout << "wrote " << path_in(c, "tradeoff.csv") << '\n';
    return 0;
}

int cmd_detect(const Manifest& m, const DetectFlags& f)
{
    const Context c = load(m);
    DetectionParams det = c.cfg.detection;
    det.snr_grid = parse_range(f.snr);
    det = validate_detection(det);

    std::vector<std::string> names = split(f.layouts, ',');
    require(!names.empty(), "--layouts must name at least one layout");
    std::vector<DetectionCurve> curves;
    json summary{{"P_fa", det.P_fa}, {"trials", det.trials}, {"config", c.cfg_json}};
    for (const auto& name : names) {
        AntennaLayout layout = equidistant_layout(c.cfg.M_t, c.cfg.L);
        if (name == "optimized") {
            const Objective obj(grid_for(c.cfg), c.code, c.cfg.radar);
            layout = AntennaLayout(run_rgpm(c, obj).best_result().spacings, c.cfg.L);
        } else {
            layout = named_layout(name, c.cfg);
        }
        curves.push_back(detection_probability(layout, c.code, c.cfg.radar, det, c.cfg.seed, c.cfg.theta_eval));
        const auto& cur = curves.back();
        const std::string label = name.rfind("file:", 0) == 0 ? "file" + std::to_string(curves.size()) : name;
        CsvWriter csv(path_in(c, "detect_" + label + ".csv"), c.meta, {"snr_db", "p_d", "ci_low", "ci_high"});
        for (std::size_t i = 0; i < cur.snr_db.size(); ++i)
            csv.row({cur.snr_db[i], cur.p_d[i], cur.ci[i].low, cur.ci[i].high});
        summary["layouts"][label] = {{"threshold", cur.threshold},
                                     {"measured_pfa", cur.measured_pfa},
                                     {"pfa_ci", {cur.pfa_ci.low, cur.pfa_ci.high}},
                                     {"matched_gain", cur.matched_gain},
                                     {"layout", layout_to_json(layout.spacings(), layout.aperture_budget())}};
    }
    std::vector<std::string> cols{"snr_db"};
    for (const auto& n : names) cols.push_back("p_d_" + (n.rfind("file:", 0) == 0 ? std::string("file") : n));
    CsvWriter cmp(path_in(c, "detect_comparison.csv"), c.meta, cols);
    for (std::size_t i = 0; i < det.snr_grid.size(); ++i) {
        std::vector<double> row{det.snr_grid[i]};
        for (const auto& cur : curves) row.push_back(cur.p_d[i]);
        cmp.row(row);
    }
    write_json(path_in(c, "detect.json"), c.meta, summary);
    std::cout << "wrote " << path_in(c, "detect_comparison.csv") << '\n';
    return 0;
}

} // namespace mafh::cli
