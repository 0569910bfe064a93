#pragma once

#include "mafh/ambiguity.hpp"
#include "mafh/model.hpp"

#include <array>
#include <span>
#include <vector>

namespace mafh {

// How the Doppler and delay objectives treat the angle: integrate theta over
// [-pi/2, pi/2] (as the angular objective does) or evaluate one slice at
// theta_eval.
enum class ThetaMode { full, single };

// Riemann-sum discretization. Each axis is cut into n equal segments and
// sampled at the n + 1 left endpoints i = 0..n. Cell areas use normalized
// delay (tau / delta_t) and Doppler (v * delta_t); angles stay in radians.
struct ObjectiveGrid {
    int n1 = 0;
    int n2 = 0;
    int n3 = 0;
    double d_theta = 0.0;
    double d_theta_p = 0.0;
    double d_v = 0.0;    // Hz
    double d_tau = 0.0;  // s
    std::vector<double> theta_samples;
    std::vector<double> v_samples;
    std::vector<double> tau_samples;
    std::array<double, 3> alpha{1.0, 0.0, 0.0};
    ThetaMode theta_mode = ThetaMode::full;
    double theta_eval = kPi / 3.0;
};

std::array<double, 3> validate_alpha(std::array<double, 3> alpha);

// Smallest segment counts satisfying the sampling bounds
// n1 >= 2 pi / B_min(M_t, L, 0), n2 >= 4 f_max T_w, n3 >= 4 Q dt K df.
ObjectiveGrid build_grid(const RadarConfig& cfg, const AntennaLayout& layout, std::array<double, 3> alpha,
                         double theta_eval = kPi / 3.0, ThetaMode mode = ThetaMode::full);
ObjectiveGrid build_grid(const RadarConfig& cfg, int num_antennas, double aperture_budget,
                         std::array<double, 3> alpha, double theta_eval = kPi / 3.0,
                         ThetaMode mode = ThetaMode::full);

// Refines every axis by `factor` (n -> factor * n).
ObjectiveGrid refine_grid(const ObjectiveGrid& grid, const RadarConfig& cfg, int factor);

struct ObjectiveTerms {
    double f1 = 0.0;
    double f2 = 0.0;
    double f3 = 0.0;
    double f = 0.0;
};

// Anything the optimizers can minimize over the spacing vector (wavelengths).
class DifferentiableObjective {
public:
    virtual ~DifferentiableObjective() = default;
    virtual double value(std::span<const double> spacings) const = 0;
    virtual std::vector<double> gradient(std::span<const double> spacings) const = 0;
};

// Weighted objective with its analytic gradient. Construction tabulates the
// geometry-independent waveform cross terms for every Doppler/delay sample;
// evaluation is then O(M_t^2) per grid point and runs the grid points in
// parallel with a fixed-order reduction.
class Objective final : public DifferentiableObjective {
public:
    Objective(ObjectiveGrid grid, const FhCode& code, const RadarConfig& cfg);

    const ObjectiveGrid& grid() const { return grid_; }
    int num_antennas() const { return M_; }

    // All three terms regardless of weights.
    ObjectiveTerms terms(std::span<const double> spacings) const;
    // Weighted sum; zero-weight terms are skipped.
    double value(std::span<const double> spacings) const override;
    std::vector<double> gradient(std::span<const double> spacings) const override;

    struct TermGradients {
        ObjectiveTerms terms;
        std::array<std::vector<double>, 3> grad;
    };
    // Values and gradients of the requested terms (mask per f1, f2, f3).
    TermGradients evaluate(std::span<const double> spacings, std::array<bool, 3> mask, bool want_grad) const;

private:
    ObjectiveGrid grid_;
    int M_ = 0;
    std::vector<cplx> w_matched_;                 // M x M at tau = v = 0
    std::vector<std::vector<cplx>> w_doppler_;    // per v sample
    std::vector<std::vector<cplx>> w_delay_;      // per tau sample
    double dv_norm_ = 0.0;
    double dtau_norm_ = 0.0;
};

double f1_bar(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code, const RadarConfig& cfg);
double f2_bar(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code, const RadarConfig& cfg);
double f3_bar(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code, const RadarConfig& cfg);
double f_weighted(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code, const RadarConfig& cfg);
std::vector<double> grad_f_weighted(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code,
                                    const RadarConfig& cfg);

struct FiniteDiffGradient {
    std::vector<double> gradient;
    // Number of +/- h probes that left the feasible polytope (still evaluated;
    // the objective is defined for any spacing vector).
    int infeasible_probes = 0;
};

// Central differences of f_weighted with step h (wavelengths).
FiniteDiffGradient finite_diff_grad(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code,
                                    const RadarConfig& cfg, double h);
FiniteDiffGradient finite_diff_grad(const DifferentiableObjective& objective, std::span<const double> spacings,
                                    double aperture_budget, double h);

} // namespace mafh
