#pragma once

#include "mafh/model.hpp"

#include <span>
#include <vector>

namespace mafh {

// Two half-wavelength-spaced end clusters separated by one large gap; the
// layout with the narrowest angular main lobe for a given aperture L.
AntennaLayout mmlwd_layout(int num_antennas, double aperture_budget);

// Null-to-null angular main lobe width (rad) of the MMLWD layout at angle
// theta. Throws when the lobe extends past endfire.
double b_min(int num_antennas, double aperture_budget, double theta);

enum class BoundAxis { doppler, delay };

struct TheoryBound {
    BoundAxis axis = BoundAxis::doppler;
    std::vector<double> coords;  // Hz | s
    std::vector<double> lower;   // same normalization as |chi|
    // Bounds carry no information at theta = 0 (array phases vanish).
    bool uninformative = false;
};

// Self-term used by the Doppler bound. `subpulse_coherent` keeps the Doppler
// phase progression across subpulses, |M_t sinc(v dt) (1/Q) sum_q e^{j2 pi v q dt}|,
// which is what the closed form produces. `single_subpulse` is |M_t sinc(v dt)|,
// which can exceed |chi| once Q > 1 and is kept for comparison only.
enum class DopplerSelfTerm { subpulse_coherent, single_subpulse };

TheoryBound doppler_lower_bound(std::span<const double> v_grid, const FhCode& code, const RadarConfig& cfg,
                                double theta = 0.0,
                                DopplerSelfTerm self_term = DopplerSelfTerm::subpulse_coherent);

TheoryBound delay_lower_bound(std::span<const double> tau_grid, const FhCode& code, const RadarConfig& cfg,
                              double theta = 0.0);

} // namespace mafh
