#pragma once

#include "mafh/rgpm.hpp"

#include <cstdint>
#include <vector>

namespace mafh {

struct GaParams {
    int G = 100;          // generations, counting the initial population
    int N = 16;           // population size
    double p_cross = 0.9;
    double p_mut = 0.2;
    double sigma_mut = 0.1;  // wavelengths
    std::uint64_t seed = 0;
};

void validate_ga(const GaParams& params);

struct GaResult {
    std::vector<double> spacings;
    double f = 0.0;
    std::vector<double> best_trace;  // best objective after each generation
};

// Clamp to >= lambda/2, then shrink the excess over lambda/2 by a common
// factor until the aperture budget holds.
std::vector<double> repair(std::vector<double> spacings, const FeasiblePolytope& poly);

// Elitist real-coded GA: size-2 tournaments, per-gene blend crossover,
// Gaussian mutation, one elite. All randomness is drawn in the sequential
// generation loop, so results depend only on the seed.
GaResult ga_optimize(const DifferentiableObjective& objective, const FeasiblePolytope& poly, const GaParams& params);

} // namespace mafh
