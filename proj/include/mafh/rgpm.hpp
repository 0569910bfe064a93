#pragma once

#include "mafh/objective.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mafh {

// {d : A d >= b} with A = [I; -1^T] and b = [0.5 * 1; -L] (wavelengths).
struct FeasiblePolytope {
    int num_antennas = 0;
    double aperture_budget = 0.0;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;

    static FeasiblePolytope make(int num_antennas, double aperture_budget);
    bool contains(std::span<const double> spacings, double tol = 1e-12) const;
};

// Indices of rows with |A_i d - b_i| <= tol. Throws when d is infeasible by more than tol.
std::vector<int> active_set(std::span<const double> spacings, const FeasiblePolytope& poly, double tol = 1e-9);

Eigen::MatrixXd active_rows(const FeasiblePolytope& poly, const std::vector<int>& rows);

// P = I - M^T (M M^T)^{-1} M, or I for an empty M. Throws on rank deficiency.
Eigen::MatrixXd projection_matrix(const Eigen::MatrixXd& m_active, int dim);

struct ArmijoParams {
    double sigma = 1e-4;
    double rho = 0.5;
    double omega0 = 1.0;
    double omega_min = 1e-12;
};

struct ArmijoResult {
    double omega = 0.0;
    double f_new = 0.0;
    bool stalled = false;
    // The feasibility cap was below omega0.
    bool capped = false;
};

// Backtracks omega from min(omega0, largest feasible step along -dir) until
// f(d - omega dir) <= f(d) - sigma omega |dir|^2.
ArmijoResult armijo_step(const DifferentiableObjective& objective, std::span<const double> spacings, double f_current,
                         std::span<const double> dir, const FeasiblePolytope& poly, const ArmijoParams& params);

struct RgpmParams {
    int K_max = 150;
    double T = 1e-2;
    double active_tol = 1e-9;
    ArmijoParams armijo;
};

struct TraceRow {
    int k = 0;
    double f = 0.0;
    double grad_norm = 0.0;  // |P grad f| at d^k after constraint dropping
    int active_count = 0;
    double omega = 0.0;      // step taken from d^k (0 on the last row)
    std::vector<double> d;   // the iterate d^k
};

struct RgpmResult {
    std::vector<double> spacings;
    double f = 0.0;
    std::vector<TraceRow> trace;
    bool converged = false;
    bool stalled = false;
    // Multipliers (M M^T)^{-1} M grad f at the final point (empty when interior).
    std::vector<double> multipliers;
    double final_projected_norm = 0.0;
};

RgpmResult rgpm_optimize(const DifferentiableObjective& objective, std::span<const double> d0,
                         const FeasiblePolytope& poly, const RgpmParams& params);

struct MultistartRun {
    std::string label;
    std::vector<double> start;
    RgpmResult result;
};

struct MultistartResult {
    std::vector<MultistartRun> runs;
    std::size_t best = 0;
    const RgpmResult& best_result() const { return runs[best].result; }
};

// Starts, in order: equidistant (lambda/2), MMLWD, then random feasible layouts
// seeded from `seed`. Ties keep the earlier start.
std::vector<std::pair<std::string, std::vector<double>>> default_starts(int num_antennas, double aperture_budget,
                                                                         int count, std::uint64_t seed);

MultistartResult rgpm_multistart(const DifferentiableObjective& objective, const FeasiblePolytope& poly,
                                 const std::vector<std::pair<std::string, std::vector<double>>>& starts,
                                 const RgpmParams& params);

} // namespace mafh
