#include "mafh/detection.hpp"

#include "mafh/ambiguity.hpp"
#include "mafh/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mafh {

namespace {

constexpr std::int64_t kChunk = 1 << 16;

enum Purpose : std::uint32_t { calibration = 1, validation = 2, signal = 3 };

std::mt19937_64 stream(std::uint64_t seed, Purpose purpose, std::uint64_t index, std::uint64_t chunk)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
}

// Number of draws of |a + n|^2 (n ~ CN(0, noise_var)) exceeding threshold.
std::int64_t count_exceed(double amplitude, double noise_var, double threshold, std::int64_t trials,
                          std::uint64_t seed, Purpose purpose, std::uint64_t index)
{
    const std::int64_t chunks = (trials + kChunk - 1) / kChunk;
    const double sd = std::sqrt(noise_var / 2.0);
    std::int64_t total = 0;
#pragma omp parallel for schedule(static) reduction(+ : total)
    for (std::int64_t c = 0; c < chunks; ++c) {
        auto rng = stream(seed, purpose, index, static_cast<std::uint64_t>(c));
        std::normal_distribution<double> g(0.0, sd);
        const std::int64_t n = std::min(kChunk, trials - c * kChunk);
        std::int64_t hits = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            const double re = amplitude + g(rng);
            const double im = g(rng);
            if (re * re + im * im > threshold) ++hits;
        }
        total += hits;
    }
    return total;
}

} // namespace

Interval binomial_ci95(std::int64_t successes, std::int64_t trials)
{
    require(trials > 0 && successes >= 0 && successes <= trials, "invalid binomial counts");
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1.0 + z * z / n;
    const double centre = (p + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

DetectionCurve detection_probability(const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg,
                                     const DetectionParams& det_in, std::uint64_t seed, double theta)
{
    const DetectionParams det = validate_detection(det_in);
    require(!det.snr_grid.empty(), "detection needs at least one SNR point");
    const double noise_var = static_cast<double>(layout.num_antennas()) * cfg.Q;

    DetectionCurve out;
    out.matched_gain = std::abs(chi({0.0, 0.0, theta, theta}, layout, code, cfg));

    // Calibration: exact order statistic of the noise-only draws.
    const std::int64_t chunks = (det.trials + kChunk - 1) / kChunk;
    std::vector<double> noise(static_cast<std::size_t>(det.trials));
    const double sd = std::sqrt(noise_var / 2.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
        auto rng = stream(seed, calibration, 0, static_cast<std::uint64_t>(c));
        std::normal_distribution<double> g(0.0, sd);
        const std::int64_t n = std::min(kChunk, det.trials - c * kChunk);
        for (std::int64_t i = 0; i < n; ++i) {
            const double re = g(rng);
            const double im = g(rng);
            noise[static_cast<std::size_t>(c * kChunk + i)] = re * re + im * im;
        }
    }
    // Threshold t with exactly k = floor(P_fa * trials) draws strictly above it.
    const auto k = static_cast<std::int64_t>(std::floor(det.P_fa * static_cast<double>(det.trials)));
    const auto pos = static_cast<std::size_t>(det.trials - k - 1);
    std::nth_element(noise.begin(), noise.begin() + static_cast<std::ptrdiff_t>(pos), noise.end());
    out.threshold = noise[pos];
    noise.clear();
    noise.shrink_to_fit();

    const std::int64_t fa = count_exceed(0.0, noise_var, out.threshold, det.trials, seed, validation, 0);
    out.measured_pfa = static_cast<double>(fa) / static_cast<double>(det.trials);
    const auto expected = static_cast<std::int64_t>(std::llround(det.P_fa * static_cast<double>(det.trials)));
    out.pfa_ci = binomial_ci95(expected, det.trials);

    for (std::size_t i = 0; i < det.snr_grid.size(); ++i) {
        const double snr = std::pow(10.0, det.snr_grid[i] / 10.0);
        const double amplitude = std::sqrt(snr * det.M_r) * cfg.Q * out.matched_gain;
        const std::int64_t hits = count_exceed(amplitude, noise_var, out.threshold, det.trials_per_snr, seed, signal, i);
        out.snr_db.push_back(det.snr_grid[i]);
        out.p_d.push_back(static_cast<double>(hits) / static_cast<double>(det.trials_per_snr));
        out.ci.push_back(binomial_ci95(hits, det.trials_per_snr));
    }
    return out;
}

} // namespace mafh
