#pragma once

#include "mafh/model.hpp"

#include <cstdint>
#include <vector>

namespace mafh {

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval at 95% for k successes in n trials.
Interval binomial_ci95(std::int64_t successes, std::int64_t trials);

struct DetectionCurve {
    std::vector<double> snr_db;
    std::vector<double> p_d;
    std::vector<Interval> ci;
    double threshold = 0.0;
    // False-alarm rate on an independent noise-only set of `trials` draws.
    double measured_pfa = 0.0;
    Interval pfa_ci;  // binomial 95% interval of the nominal P_fa at that trial count
    double matched_gain = 0.0;  // |chi(0, 0, theta, theta)|
};

// Square-law detector on the matched-filter output at the true target
// parameters: |sqrt(snr M_r) Q chi(0, 0, theta, theta) + n|^2 with n the sum of
// M_t Q unit-variance complex noise samples. The threshold is the empirical
// (1 - P_fa) quantile of `trials` noise-only draws. Random streams depend on
// (seed, purpose, SNR index, chunk) only, so the result is independent of the
// thread count and two layouts see the same noise.
DetectionCurve detection_probability(const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg,
                                     const DetectionParams& det, std::uint64_t seed, double theta = kPi / 3.0);

} // namespace mafh
