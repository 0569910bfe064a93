#pragma once

#include "mafh/ga.hpp"
#include "mafh/objective.hpp"
#include "mafh/rgpm.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace mafh {

inline constexpr const char* kToolVersion = "0.1.0";

// Everything a CLI run depends on, flattened to one JSON object.
struct RunConfig {
    RadarConfig radar;
    int M_t = 8;
    double L = 7.0;  // wavelengths
    std::uint64_t seed = 0;
    std::array<double, 3> alpha{1.0, 0.0, 0.0};
    double theta_eval = kPi / 3.0;
    ThetaMode theta_mode = ThetaMode::full;
    RgpmParams rgpm;
    int starts = 4;
    GaParams ga;
    DetectionParams detection;
};

nlohmann::json to_json(const RunConfig& cfg);
// Unknown keys are rejected; missing keys keep their defaults. The result is validated.
RunConfig run_config_from_json(const nlohmann::json& j);

// "key=value" with value parsed as JSON when possible, else as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

// 64-bit FNV-1a of the canonical (sorted-key, compact) JSON text, as hex.
std::string config_hash(const nlohmann::json& j);

// CSV number format (%.10g).
std::string format_double(double x);

nlohmann::json layout_to_json(std::span<const double> spacings, double aperture_budget);
AntennaLayout layout_from_json(const nlohmann::json& j);

struct OutputMeta {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string normalization;
};

// CSV with "# key: value" metadata lines, then a header row. LF endings.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const OutputMeta& meta, const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    void row(const std::vector<double>& cells);

private:
    std::ofstream out_;
    std::size_t width_;
};

void write_json(const std::string& path, const OutputMeta& meta, nlohmann::json body);

} // namespace mafh
