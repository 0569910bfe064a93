#pragma once

#include "mafh/io.hpp"

#include <string>
#include <vector>

namespace mafh::cli {

struct Manifest {
    std::string command;
    std::string config_path;
    std::string output_dir = ".";
    std::vector<std::string> overrides;
};

struct AfFlags {
    std::string axis;
    std::string layout = "mmlwd";
    double theta = 0.0;
    int points = 2001;
    double lo = 0.0;
    double hi = 0.0;
    bool range_set = false;
};

struct TheoryFlags {
    std::string sweep;
    std::string bound;
    int Mt = 0;           // 0 = config M_t
    double theta = 0.0;
    double tau_max = 0.0; // 0 = Q * delta_t
    double v_max = 0.0;   // 0 = f_max
    int points = 401;
};

struct OptimizeFlags {
    std::string method = "rgpm";
};

struct TradeoffFlags {
    int resolution = 5;
};

struct DetectFlags {
    std::string snr = "-30:0:1";
    std::string layouts = "equidistant,optimized";
};

// Each returns the process exit code; hard errors surface as mafh::Error.
int cmd_af(const Manifest& m, const AfFlags& f);
int cmd_theory(const Manifest& m, const TheoryFlags& f);
int cmd_optimize(const Manifest& m, const OptimizeFlags& f);
int cmd_tradeoff(const Manifest& m, const TradeoffFlags& f);
int cmd_detect(const Manifest& m, const DetectFlags& f);

// Defaults, then the config file, then --set overrides.
nlohmann::json effective_config_json(const Manifest& m);

std::vector<double> parse_range(const std::string& spec);

} // namespace mafh::cli
