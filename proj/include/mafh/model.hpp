#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mafh {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

// Waveform and system constants. Frequencies in Hz, times in s.
struct RadarConfig {
    double f_c = 8.2e9;
    double bandwidth = 8e6;
    double lambda = kSpeedOfLight / 8.2e9;  // metres, derived from f_c
    double delta_f = 1e6;
    double delta_t = 1e-6;
    int Q = 6;
    int K = 8;
    double T_w = 6e-6;
    double T_P = 20e-6;
    double f_s = 160e6;
    double f_max = 10e6;

    // Delta_f * Delta_t; the waveforms are orthogonal at zero delay/Doppler
    // when this is a positive integer.
    double hop_time_product() const { return delta_f * delta_t; }
    bool orthogonal_hops() const;
};

// The X-band defaults used throughout the experiments.
RadarConfig default_config();

// Returns cfg with lambda re-derived from f_c; throws Error naming the first
// violated invariant.
RadarConfig validate_config(RadarConfig cfg);

// Transmit geometry. All lengths are in wavelengths.
class AntennaLayout {
public:
    // spacings[i] is d_{t,i+1}; the first antenna sits at the origin.
    AntennaLayout(std::vector<double> spacings, double aperture_budget);

    // Single transmit element. Only the ambiguity/objective math accepts it;
    // layout constructors and optimizers require at least two elements.
    static AntennaLayout single_element();

    int num_antennas() const { return static_cast<int>(positions_.size()); }
    double aperture_budget() const { return budget_; }
    double aperture() const { return positions_.back(); }
    std::span<const double> spacings() const { return spacings_; }
    std::span<const double> positions() const { return positions_; }

private:
    AntennaLayout() = default;

    std::vector<double> spacings_;
    std::vector<double> positions_;
    double budget_ = 0.0;
};

// Minimum spacing is half a wavelength.
inline constexpr double kMinSpacing = 0.5;
// Relative slack applied when checking layout feasibility.
inline constexpr double kLayoutTolerance = 1e-12;

bool is_feasible(std::span<const double> spacings, double aperture_budget, double tol = 1e-9);
std::vector<double> positions_from_spacings(std::span<const double> spacings);

AntennaLayout equidistant_layout(int num_antennas);
AntennaLayout equidistant_layout(int num_antennas, double aperture_budget);
AntennaLayout random_feasible_layout(int num_antennas, double aperture_budget, std::uint64_t seed);

// Hop-index matrix c (M_t x Q, entries in 1..K), column-orthogonal.
class FhCode {
public:
    explicit FhCode(std::vector<std::vector<int>> rows);

    int num_antennas() const { return rows_; }
    int num_subpulses() const { return cols_; }
    int operator()(int m, int q) const { return data_[static_cast<std::size_t>(m * cols_ + q)]; }
    int max_hop() const;
    std::vector<std::vector<int>> rows() const;

    // Throws unless every entry lies in 1..cfg.K and the shape matches cfg.Q.
    void check_against(int K, int Q) const;

    bool operator==(const FhCode&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> data_;
};

// Column-wise random permutations of {1..K}; deterministic in seed.
FhCode generate_fh_code(const RadarConfig& cfg, int num_antennas, std::uint64_t seed);

struct DetectionParams {
    int M_r = 8;
    double P_fa = 1e-4;
    std::vector<double> snr_grid;
    // Noise-only calibration trials; must be at least 10 / P_fa.
    std::int64_t trials = 1000000;
    // Signal-plus-noise trials per SNR point.
    std::int64_t trials_per_snr = 20000;
};

DetectionParams validate_detection(DetectionParams det);

} // namespace mafh
