#pragma once

#include "mafh/ambiguity.hpp"
#include "mafh/theory.hpp"

#include <span>
#include <vector>

namespace mafh {

// A null is a local minimum of |chi| at or below this fraction of the peak.
inline constexpr double kNullThreshold = 0.05;

struct LobeReport {
    double main_lobe_width = 0.0;  // axis units, null to null
    double psl_db = 0.0;           // peak sidelobe relative to the matched peak
    double peak_value = 0.0;       // |chi| at the matched coordinate
    double left_null = 0.0;
    double right_null = 0.0;
};

// Sample index of the matched coordinate (theta_p = theta, v = 0 or tau = 0).
std::size_t matched_index(const AmbiguitySlice& slice);

// Null positions are refined by a parabola through |chi|^2 at the three
// samples around each bracketing minimum. Throws when either side of the
// peak has no null inside the slice.
double main_lobe_width(const AmbiguitySlice& slice);
double peak_sidelobe_level(const AmbiguitySlice& slice);
LobeReport lobe_report(const AmbiguitySlice& slice);

struct BoundGap {
    double min_gap = 0.0;
    int violation_count = 0;  // points with |chi| - bound < -1e-6
};

BoundGap bound_gap(const AmbiguitySlice& slice, const TheoryBound& bound);

// Rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

} // namespace mafh
