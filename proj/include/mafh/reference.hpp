#pragma once

#include "mafh/objective.hpp"

#include <vector>

// Straightforward serial implementations kept as a cross-check for the fast
// parallel kernels. Every grid point re-evaluates the full quadruple sum in
// its amplitude/phase form; nothing is tabulated or shared.
namespace mafh::reference {

struct PointValue {
    double mag_sq = 0.0;
    std::vector<double> grad;  // d|chi|^2 / d d_x, x = 1..M_t-1
};

PointValue point(const AmbiguityQuery& q, const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg);

struct Evaluation {
    ObjectiveTerms terms;
    std::vector<double> gradient;  // of the weighted objective
};

Evaluation evaluate(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code,
                    const RadarConfig& cfg);

} // namespace mafh::reference
