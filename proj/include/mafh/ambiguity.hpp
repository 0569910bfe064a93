#pragma once

#include "mafh/model.hpp"

#include <complex>
#include <string>
#include <vector>

namespace mafh {

using cplx = std::complex<double>;

// Normalized sinc, sin(pi x) / (pi x).
double sinc(double x);

// Delay mismatch tau (s), Doppler mismatch v (Hz), true angle theta and
// assumed angle theta_p (rad, within [-pi/2, pi/2]).
struct AmbiguityQuery {
    double tau = 0.0;
    double v = 0.0;
    double theta = 0.0;
    double theta_p = 0.0;
};

// All ambiguity values are normalized so the matched peak equals M_t: the
// quadruple subpulse sum is divided by Q.
inline constexpr const char* kNormalization = "closed_form_sum_divided_by_Q";

// Subpulse kernel: ((dt - |tau|) / dt) e^{j pi v (dt - tau)} sinc(v (dt - |tau|))
// for |tau| < dt, zero otherwise.
cplx chi_r(double tau, double v, double delta_t);

// Closed-form ambiguity function (quadruple sum over antennas and subpulses).
cplx chi(const AmbiguityQuery& q, const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg);

// Angular ambiguity at zero delay/Doppler: sum_m e^{j 2 pi (sin theta - sin theta_p) x_m}.
// The cfg overload checks that Delta_f * Delta_t is a positive integer, the
// condition under which this equals chi(0, 0, theta, theta_p).
cplx chi_angular(double theta, double theta_p, const AntennaLayout& layout);
cplx chi_angular(double theta, double theta_p, const AntennaLayout& layout, const RadarConfig& cfg);

// |chi|^2 assembled from the real amplitude/phase decomposition
// (epsilon(tau, v) amplitudes, zeta phases) the gradient differentiates.
double chi_mag_sq(const AmbiguityQuery& q, const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg);

// Direct numerical integration of the defining integral over sampled FH
// waveforms (trapezoid rule at cfg.f_s, split at the subpulse edges).
cplx chi_oracle(const AmbiguityQuery& q, const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg);

enum class SliceAxis { angular, doppler, delay };

std::string to_string(SliceAxis axis);
SliceAxis slice_axis_from_string(const std::string& name);

struct SliceMeta {
    std::vector<double> spacings;  // wavelengths
    double aperture_budget = 0.0;  // wavelengths
    std::vector<std::vector<int>> code;
    RadarConfig cfg;
    AmbiguityQuery fixed;
    std::string normalization = kNormalization;
};

struct AmbiguitySlice {
    SliceAxis axis = SliceAxis::angular;
    std::vector<double> coords;  // rad | Hz | s
    std::vector<double> values;  // |chi|
    SliceMeta meta;
};

// Uniform |chi| samples along one axis of the closed form, with the matched
// coordinate inserted when it falls inside [lo, hi] but off the grid.
AmbiguitySlice slice(SliceAxis axis, const AmbiguityQuery& fixed, double lo, double hi, int n_points,
                     const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg);

// Angular slice |chi_angular(theta, theta_p)| over theta_p.
AmbiguitySlice angular_slice(double theta, double lo, double hi, int n_points, const AntennaLayout& layout);

} // namespace mafh

namespace mafh {

// Geometry-free part of chi: W[m * M + m'] = (1/Q) sum_{q,q'} chi_r(...) e^{j waveform phase},
// so that chi = sum_{m,m'} W[m,m'] e^{j 2 pi (x_m sin theta - x_m' sin theta_p)}.
std::vector<cplx> waveform_cross_terms(double tau, double v, const FhCode& code, const RadarConfig& cfg);

} // namespace mafh
