#include "mafh/rgpm.hpp"

#include "mafh/error.hpp"
#include "mafh/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mafh {

namespace {

Eigen::VectorXd to_vec(std::span<const double> v)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

std::vector<double> to_std(const Eigen::VectorXd& v)
{
    return {v.data(), v.data() + v.size()};
}

void check_projector(const Eigen::MatrixXd& P, const Eigen::MatrixXd& m_active)
{
    constexpr double tol = 1e-10;
    require((P - P.transpose()).cwiseAbs().maxCoeff() <= tol, "projection matrix lost symmetry");
    require((P * P - P).cwiseAbs().maxCoeff() <= tol, "projection matrix is not idempotent");
    if (m_active.rows() > 0)
        require((m_active * P).cwiseAbs().maxCoeff() <= tol, "projection does not annihilate active rows");
}

// Pulls coordinates sitting within tol of a face exactly onto it so the
// active set is stable from one iteration to the next.
void snap(Eigen::VectorXd& d, const FeasiblePolytope& poly, double tol)
{
    for (Eigen::Index i = 0; i < d.size(); ++i)
        if (std::abs(d(i) - kMinSpacing) <= tol) d(i) = kMinSpacing;
    const double excess = d.sum() - poly.aperture_budget;
    if (std::abs(excess) <= tol && excess > 0.0) {
        // Shave the overshoot from the largest spacing; it stays above lambda/2.
        Eigen::Index imax = 0;
        d.maxCoeff(&imax);
        d(imax) -= excess;
    }
}

} // namespace

FeasiblePolytope FeasiblePolytope::make(int num_antennas, double aperture_budget)
{
    require(num_antennas >= 2, "optimization needs M_t >= 2");
    require(aperture_budget >= kMinSpacing * (num_antennas - 1) * (1.0 - 1e-12),
            "infeasible aperture budget: L < (M_t - 1) / 2");
    const int n = num_antennas - 1;
    FeasiblePolytope p;
    p.num_antennas = num_antennas;
    p.aperture_budget = aperture_budget;
    p.A = Eigen::MatrixXd::Zero(n + 1, n);
    p.A.topRows(n).setIdentity();
    p.A.row(n).setConstant(-1.0);
    p.b = Eigen::VectorXd::Constant(n + 1, kMinSpacing);
    p.b(n) = -aperture_budget;
    return p;
}

bool FeasiblePolytope::contains(std::span<const double> spacings, double tol) const
{
    if (static_cast<Eigen::Index>(spacings.size()) != A.cols()) return false;
    const Eigen::VectorXd slack = A * to_vec(spacings) - b;
    return slack.minCoeff() >= -tol;
}

std::vector<int> active_set(std::span<const double> spacings, const FeasiblePolytope& poly, double tol)
{
    require(static_cast<Eigen::Index>(spacings.size()) == poly.A.cols(), "spacing vector length must be M_t - 1");
    const Eigen::VectorXd slack = poly.A * to_vec(spacings) - poly.b;
    require(slack.minCoeff() >= -tol, "spacing vector is infeasible");
    std::vector<int> rows;
    for (Eigen::Index i = 0; i < slack.size(); ++i)
        if (std::abs(slack(i)) <= tol) rows.push_back(static_cast<int>(i));
    return rows;
}

Eigen::MatrixXd active_rows(const FeasiblePolytope& poly, const std::vector<int>& rows)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), poly.A.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = poly.A.row(rows[i]);
    return m;
}

Eigen::MatrixXd projection_matrix(const Eigen::MatrixXd& m_active, int dim)
{
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim, dim);
    if (m_active.rows() == 0) return I;
    require(m_active.cols() == dim, "active matrix has the wrong width");
    const Eigen::MatrixXd gram = m_active * m_active.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    require(lu.rank() == gram.rows(), "rank-deficient active constraint matrix");
    return I - m_active.transpose() * lu.solve(m_active);
}

ArmijoResult armijo_step(const DifferentiableObjective& objective, std::span<const double> spacings, double f_current,
                         std::span<const double> dir, const FeasiblePolytope& poly, const ArmijoParams& params)
{
    const Eigen::VectorXd d = to_vec(spacings);
    const Eigen::VectorXd p = to_vec(dir);
    const double p_norm_sq = p.squaredNorm();
    require(p_norm_sq > 0.0, "Armijo search needs a nonzero direction");

    // Moving to d - omega p changes A_i d by -omega A_i p; rows with A_i p > 0
    // approach their bound.
    double cap = std::numeric_limits<double>::infinity();
    const Eigen::VectorXd slack = poly.A * d - poly.b;
    const Eigen::VectorXd rate = poly.A * p;
    for (Eigen::Index i = 0; i < rate.size(); ++i) {
        if (rate(i) > 1e-12 * std::sqrt(p_norm_sq)) cap = std::min(cap, std::max(0.0, slack(i)) / rate(i));
    }

    ArmijoResult out;
    double omega = params.omega0;
    if (cap < omega) {
        omega = cap;
        out.capped = true;
    }
    std::vector<double> trial(spacings.size());
    while (omega >= params.omega_min) {
        for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = spacings[i] - omega * dir[i];
        if (poly.contains(trial, 1e-12 * 0.5)) {
            const double f_trial = objective.value(trial);
            if (f_trial <= f_current - params.sigma * omega * p_norm_sq) {
                out.omega = omega;
                out.f_new = f_trial;
                return out;
            }
        }
        omega *= params.rho;
    }
    out.stalled = true;
    out.f_new = f_current;
    return out;
}

RgpmResult rgpm_optimize(const DifferentiableObjective& objective, std::span<const double> d0,
                         const FeasiblePolytope& poly, const RgpmParams& params)
{
    require(params.K_max >= 0, "K_max must be non-negative");
    require(params.T > 0.0, "threshold T must be positive");
    require(poly.contains(d0, params.active_tol), "initial layout is infeasible");
    const int n = static_cast<int>(poly.A.cols());

    Eigen::VectorXd d = to_vec(d0);
    snap(d, poly, params.active_tol);
    RgpmResult res;
    double f = objective.value(to_std(d));

    for (int k = 0;; ++k) {
        const auto ds = to_std(d);
        auto active = active_set(ds, poly, params.active_tol);
        TraceRow row;
        row.k = k;
        row.f = f;
        row.d = ds;

        if (static_cast<int>(active.size()) == poly.A.rows()) {
            // Every constraint tight: the polytope is the single point d.
            row.active_count = static_cast<int>(active.size());
            res.trace.push_back(row);
            res.converged = true;
            break;
        }

        const Eigen::VectorXd g = to_vec(objective.gradient(ds));
        Eigen::VectorXd p;
        bool done = false;
        for (;;) {
            const Eigen::MatrixXd M = active_rows(poly, active);
            const Eigen::MatrixXd P = projection_matrix(M, n);
            check_projector(P, M);
            p = P * g;
            res.final_projected_norm = p.norm();
            res.multipliers.clear();
            if (p.norm() >= params.T) break;
            if (active.empty()) {
                done = true;
                break;
            }
            const Eigen::VectorXd u = (M * M.transpose()).ldlt().solve(M * g);
            res.multipliers = to_std(u);
            Eigen::Index j = 0;
            if (u.minCoeff(&j) >= -1e-9) {
                done = true;
                break;
            }
            active.erase(active.begin() + j);
        }
        row.grad_norm = p.norm();
        row.active_count = static_cast<int>(active.size());
        if (done) {
            res.trace.push_back(row);
            res.converged = true;
            break;
        }
        if (k >= params.K_max) {
            res.trace.push_back(row);
            break;
        }

        const auto step = armijo_step(objective, ds, f, to_std(p), poly, params.armijo);
        if (step.stalled) {
            res.trace.push_back(row);
            res.stalled = true;
            break;
        }
        row.omega = step.omega;
        res.trace.push_back(row);
        d -= step.omega * p;
        snap(d, poly, params.active_tol);
        f = objective.value(to_std(d));
    }
    res.spacings = to_std(d);
    res.f = f;
    return res;
}

std::vector<std::pair<std::string, std::vector<double>>> default_starts(int num_antennas, double aperture_budget,
                                                                         int count, std::uint64_t seed)
{
    require(count >= 1, "need at least one start");
    std::vector<std::pair<std::string, std::vector<double>>> starts;
    auto spans = [](const AntennaLayout& l) { return std::vector<double>(l.spacings().begin(), l.spacings().end()); };
    starts.emplace_back("equidistant", spans(equidistant_layout(num_antennas, aperture_budget)));
    if (count >= 2) starts.emplace_back("mmlwd", spans(mmlwd_layout(num_antennas, aperture_budget)));
    for (int i = 2; i < count; ++i) {
        const auto s = seed + static_cast<std::uint64_t>(i - 2);
        starts.emplace_back("random_" + std::to_string(s), spans(random_feasible_layout(num_antennas, aperture_budget, s)));
    }
    return starts;
}

MultistartResult rgpm_multistart(const DifferentiableObjective& objective, const FeasiblePolytope& poly,
                                 const std::vector<std::pair<std::string, std::vector<double>>>& starts,
                                 const RgpmParams& params)
{
    require(!starts.empty(), "need at least one start");
    MultistartResult out;
    for (const auto& [label, start] : starts) {
        out.runs.push_back({label, start, rgpm_optimize(objective, start, poly, params)});
        if (out.runs.back().result.f < out.runs[out.best].result.f) out.best = out.runs.size() - 1;
    }
    return out;
}

} // namespace mafh
