#include "mafh/io.hpp"

#include "mafh/error.hpp"

#include <cstdio>

namespace mafh {

using nlohmann::json;

namespace {

std::string theta_mode_name(ThetaMode m)
{
    return m == ThetaMode::full ? "full" : "single";
}

ThetaMode theta_mode_from(const std::string& s)
{
    if (s == "full") return ThetaMode::full;
    if (s == "single") return ThetaMode::single;
    throw Error("theta_mode must be 'full' or 'single', got '" + s + "'");
}

template <typename T>
void read(const json& j, const char* key, T& into)
{
    if (!j.contains(key)) return;
    try {
        into = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(std::string("config field '") + key + "' has the wrong type");
    }
}

} // namespace

json to_json(const RunConfig& c)
{
    const auto& r = c.radar;
    return json{
        {"f_c", r.f_c},
        {"bandwidth", r.bandwidth},
        {"delta_f", r.delta_f},
        {"delta_t", r.delta_t},
        {"Q", r.Q},
        {"K", r.K},
        {"T_w", r.T_w},
        {"T_P", r.T_P},
        {"f_s", r.f_s},
        {"f_max", r.f_max},
        {"M_t", c.M_t},
        {"L", c.L},
        {"seed", c.seed},
        {"alpha", c.alpha},
        {"theta_eval", c.theta_eval},
        {"theta_mode", theta_mode_name(c.theta_mode)},
        {"K_max", c.rgpm.K_max},
        {"T", c.rgpm.T},
        {"active_tol", c.rgpm.active_tol},
        {"armijo_sigma", c.rgpm.armijo.sigma},
        {"armijo_rho", c.rgpm.armijo.rho},
        {"armijo_omega0", c.rgpm.armijo.omega0},
        {"armijo_omega_min", c.rgpm.armijo.omega_min},
        {"starts", c.starts},
        {"ga_G", c.ga.G},
        {"ga_N", c.ga.N},
        {"ga_p_cross", c.ga.p_cross},
        {"ga_p_mut", c.ga.p_mut},
        {"ga_sigma_mut", c.ga.sigma_mut},
        {"M_r", c.detection.M_r},
        {"P_fa", c.detection.P_fa},
        {"snr_grid", c.detection.snr_grid},
        {"trials", c.detection.trials},
        {"trials_per_snr", c.detection.trials_per_snr},
    };
}

RunConfig run_config_from_json(const json& j)
{
    require(j.is_object(), "config must be a JSON object");
    RunConfig c;
    const auto known = to_json(c);
    for (const auto& item : j.items())
        require(known.contains(item.key()), "unknown config field '" + item.key() + "'");

    auto& r = c.radar;
    read(j, "f_c", r.f_c);
    read(j, "bandwidth", r.bandwidth);
    read(j, "delta_f", r.delta_f);
    read(j, "delta_t", r.delta_t);
    read(j, "Q", r.Q);
    read(j, "K", r.K);
    read(j, "T_w", r.T_w);
    read(j, "T_P", r.T_P);
    read(j, "f_s", r.f_s);
    read(j, "f_max", r.f_max);
    read(j, "M_t", c.M_t);
    read(j, "L", c.L);
    read(j, "seed", c.seed);
    read(j, "alpha", c.alpha);
    read(j, "theta_eval", c.theta_eval);
    std::string mode = theta_mode_name(c.theta_mode);
    read(j, "theta_mode", mode);
    c.theta_mode = theta_mode_from(mode);
    read(j, "K_max", c.rgpm.K_max);
    read(j, "T", c.rgpm.T);
    read(j, "active_tol", c.rgpm.active_tol);
    read(j, "armijo_sigma", c.rgpm.armijo.sigma);
    read(j, "armijo_rho", c.rgpm.armijo.rho);
    read(j, "armijo_omega0", c.rgpm.armijo.omega0);
    read(j, "armijo_omega_min", c.rgpm.armijo.omega_min);
    read(j, "starts", c.starts);
    read(j, "ga_G", c.ga.G);
    read(j, "ga_N", c.ga.N);
    read(j, "ga_p_cross", c.ga.p_cross);
    read(j, "ga_p_mut", c.ga.p_mut);
    read(j, "ga_sigma_mut", c.ga.sigma_mut);
    read(j, "M_r", c.detection.M_r);
    read(j, "P_fa", c.detection.P_fa);
    read(j, "snr_grid", c.detection.snr_grid);
    read(j, "trials", c.detection.trials);
    read(j, "trials_per_snr", c.detection.trials_per_snr);

    c.radar = validate_config(c.radar);
    require(c.M_t >= 2, "M_t must be at least 2");
    require(c.M_t <= c.radar.K, "M_t must not exceed K (orthogonal hops need distinct subcarriers)");
    require(c.L >= kMinSpacing * (c.M_t - 1) * (1.0 - 1e-12), "infeasible aperture budget: L < (M_t - 1) / 2");
    validate_alpha(c.alpha);
    require(c.theta_eval >= -kPi / 2.0 && c.theta_eval <= kPi / 2.0, "theta_eval must lie in [-pi/2, pi/2]");
    require(c.rgpm.K_max >= 0 && c.rgpm.T > 0.0, "K_max must be >= 0 and T > 0");
    require(c.rgpm.armijo.sigma > 0.0 && c.rgpm.armijo.sigma < 1.0, "armijo_sigma must lie in (0, 1)");
    require(c.rgpm.armijo.rho > 0.0 && c.rgpm.armijo.rho < 1.0, "armijo_rho must lie in (0, 1)");
    require(c.rgpm.armijo.omega0 > 0.0 && c.rgpm.armijo.omega_min > 0.0, "Armijo steps must be positive");
    require(c.starts >= 1, "starts must be at least 1");
    validate_ga(c.ga);
    require(c.detection.P_fa > 0.0 && c.detection.P_fa < 1.0, "P_fa must lie in (0, 1)");
    return c;
}

void apply_override(json& j, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    require(eq != std::string::npos && eq > 0, "override must look like key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    json parsed = json::parse(value, nullptr, false);
    j[key] = parsed.is_discarded() ? json(value) : parsed;
}

std::string config_hash(const json& j)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

json layout_to_json(std::span<const double> spacings, double aperture_budget)
{
    std::vector<double> x{0.0};
    for (double d : spacings) x.push_back(x.back() + d);
    return json{{"units", "wavelength"},
                {"aperture_budget", aperture_budget},
                {"spacings", std::vector<double>(spacings.begin(), spacings.end())},
                {"positions", x}};
}

AntennaLayout layout_from_json(const json& j)
{
    try {
        return AntennaLayout(j.at("spacings").get<std::vector<double>>(), j.at("aperture_budget").get<double>());
    } catch (const json::exception& e) {
        throw Error(std::string("malformed layout JSON: ") + e.what());
    }
}

CsvWriter::CsvWriter(const std::string& path, const OutputMeta& meta, const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), width_(columns.size())
{
    require(out_.good(), "cannot write " + path);
    out_ << "# tool: mafh " << kToolVersion << '\n'
         << "# command: " << meta.command << '\n'
         << "# config_hash: " << meta.config_hash << '\n'
         << "# seed: " << meta.seed << '\n'
         << "# normalization: " << meta.normalization << '\n';
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    require(cells.size() == width_, "CSV row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& cells)
{
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(format_double(v));
    row(s);
}

void write_json(const std::string& path, const OutputMeta& meta, json body)
{
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write " + path);
    body["meta"] = {{"tool", std::string("mafh ") + kToolVersion},
                    {"command", meta.command},
                    {"config_hash", meta.config_hash},
                    {"seed", meta.seed},
                    {"normalization", meta.normalization}};
    out << body.dump(2) << '\n';
}

} // namespace mafh
