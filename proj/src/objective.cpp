#include "mafh/objective.hpp"

#include "mafh/error.hpp"
#include "mafh/theory.hpp"

#include <cmath>
#include <numeric>

namespace mafh {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

int segments_for(double required)
{
    return std::max(1, static_cast<int>(std::ceil(required - 1e-9)));
}

void fill_samples(ObjectiveGrid& grid, const RadarConfig& cfg)
{
    grid.d_theta = kPi / grid.n1;
    grid.d_theta_p = grid.d_theta;
    grid.d_v = 2.0 * cfg.f_max / grid.n2;
    grid.d_tau = 2.0 * cfg.Q * cfg.delta_t / grid.n3;
    grid.theta_samples.resize(static_cast<std::size_t>(grid.n1 + 1));
    grid.v_samples.resize(static_cast<std::size_t>(grid.n2 + 1));
    grid.tau_samples.resize(static_cast<std::size_t>(grid.n3 + 1));
    for (int i = 0; i <= grid.n1; ++i) grid.theta_samples[static_cast<std::size_t>(i)] = -kPi / 2.0 + i * grid.d_theta;
    for (int i = 0; i <= grid.n2; ++i) grid.v_samples[static_cast<std::size_t>(i)] = -cfg.f_max + i * grid.d_v;
    for (int i = 0; i <= grid.n3; ++i)
        grid.tau_samples[static_cast<std::size_t>(i)] = -cfg.Q * cfg.delta_t + i * grid.d_tau;
}

std::vector<cplx> steering(std::span<const double> x, double theta)
{
    const double s = std::sin(theta);
    std::vector<cplx> a(x.size());
    for (std::size_t m = 0; m < x.size(); ++m) a[m] = std::polar(1.0, kTwoPi * x[m] * s);
    return a;
}

// |chi|^2 at one grid point and, when grad != nullptr, d|chi|^2 / d d_x for
// x = 1..M-1. t[m] = a_m (W conj b)_m and u[m'] = (a^T W)_m' conj(b_m') are
// the per-antenna contributions; position x_m depends on d_x iff x <= m, so
// the derivative collects suffix sums.
double point_value(const cplx* t, const cplx* u, int M, double s, double sp, double* grad)
{
    cplx chi_val{0.0, 0.0};
    for (int m = 0; m < M; ++m) chi_val += t[m];
    if (grad != nullptr) {
        cplx tail_t{0.0, 0.0};
        cplx tail_u{0.0, 0.0};
        for (int xi = M - 1; xi >= 1; --xi) {
            tail_t += t[xi];
            tail_u += u[xi];
            const cplx dchi = cplx{0.0, kTwoPi} * (s * tail_t - sp * tail_u);
            grad[xi - 1] = 2.0 * (std::conj(chi_val) * dchi).real();
        }
    }
    return std::norm(chi_val);
}

// Evaluates points row-major over (outer, inner) into per-point slots, then
// reduces serially so the result does not depend on the thread count.
template <typename PointFn>
double reduce_points(long n_points, int n_grad, bool want_grad, std::vector<double>& grad_out, PointFn&& fn)
{
    std::vector<double> values(static_cast<std::size_t>(n_points));
    std::vector<double> grads(want_grad ? static_cast<std::size_t>(n_points * n_grad) : 0);
#pragma omp parallel for schedule(static)
    for (long p = 0; p < n_points; ++p) {
        values[static_cast<std::size_t>(p)] = fn(p, want_grad ? grads.data() + p * n_grad : nullptr);
    }
    double total = 0.0;
    for (double v : values) total += v;
    if (want_grad) {
        grad_out.assign(static_cast<std::size_t>(n_grad), 0.0);
        for (long p = 0; p < n_points; ++p)
            for (int k = 0; k < n_grad; ++k) grad_out[static_cast<std::size_t>(k)] += grads[static_cast<std::size_t>(p * n_grad + k)];
    }
    return total;
}

} // namespace

std::array<double, 3> validate_alpha(std::array<double, 3> alpha)
{
    double sum = 0.0;
    for (double a : alpha) {
        require(a >= 0.0 && std::isfinite(a), "weights alpha must be non-negative");
        sum += a;
    }
    require(std::abs(sum - 1.0) <= 1e-9, "weights alpha must sum to 1");
    return alpha;
}

ObjectiveGrid build_grid(const RadarConfig& cfg, int num_antennas, double aperture_budget,
                         std::array<double, 3> alpha, double theta_eval, ThetaMode mode)
{
    ObjectiveGrid grid;
    grid.alpha = validate_alpha(alpha);
    grid.theta_mode = mode;
    grid.theta_eval = theta_eval;
    grid.n1 = segments_for(2.0 * kPi / b_min(num_antennas, aperture_budget, 0.0));
    grid.n2 = segments_for(4.0 * cfg.f_max * cfg.T_w);
    grid.n3 = segments_for(4.0 * cfg.Q * cfg.delta_t * cfg.K * cfg.delta_f);
    fill_samples(grid, cfg);
    return grid;
}

ObjectiveGrid build_grid(const RadarConfig& cfg, const AntennaLayout& layout, std::array<double, 3> alpha,
                         double theta_eval, ThetaMode mode)
{
    return build_grid(cfg, layout.num_antennas(), layout.aperture_budget(), alpha, theta_eval, mode);
}

ObjectiveGrid refine_grid(const ObjectiveGrid& grid, const RadarConfig& cfg, int factor)
{
    require(factor >= 1, "refinement factor must be positive");
    ObjectiveGrid out = grid;
    out.n1 *= factor;
    out.n2 *= factor;
    out.n3 *= factor;
    fill_samples(out, cfg);
    return out;
}

Objective::Objective(ObjectiveGrid grid, const FhCode& code, const RadarConfig& cfg)
    : grid_(std::move(grid)), M_(code.num_antennas())
{
    validate_alpha(grid_.alpha);
    code.check_against(cfg.K, cfg.Q);
    dv_norm_ = grid_.d_v * cfg.delta_t;
    dtau_norm_ = grid_.d_tau / cfg.delta_t;

    w_matched_ = waveform_cross_terms(0.0, 0.0, code, cfg);
    w_doppler_.resize(grid_.v_samples.size());
    w_delay_.resize(grid_.tau_samples.size());
    const auto nv = static_cast<long>(w_doppler_.size());
    const auto nt = static_cast<long>(w_delay_.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nv; ++i)
        w_doppler_[static_cast<std::size_t>(i)] = waveform_cross_terms(0.0, grid_.v_samples[static_cast<std::size_t>(i)], code, cfg);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nt; ++i)
        w_delay_[static_cast<std::size_t>(i)] = waveform_cross_terms(grid_.tau_samples[static_cast<std::size_t>(i)], 0.0, code, cfg);
}

Objective::TermGradients Objective::evaluate(std::span<const double> spacings, std::array<bool, 3> mask,
                                             bool want_grad) const
{
    require(static_cast<int>(spacings.size()) == M_ - 1, "spacing vector length must be M_t - 1");
    const int M = M_;
    const int G = M - 1;
    const auto x = positions_from_spacings(spacings);

    std::vector<std::vector<cplx>> a_theta(grid_.theta_samples.size());
    std::vector<double> sin_theta(grid_.theta_samples.size());
    for (std::size_t i = 0; i < a_theta.size(); ++i) {
        a_theta[i] = steering(x, grid_.theta_samples[i]);
        sin_theta[i] = std::sin(grid_.theta_samples[i]);
    }

    TermGradients out;

    if (mask[0]) {
        // r(i1) = a(i1)^T W and c(i2) = W conj(a(i2)) are shared by a whole
        // row/column of the (theta, theta') grid.
        const std::size_t nt = a_theta.size();
        std::vector<std::vector<cplx>> r(nt, std::vector<cplx>(static_cast<std::size_t>(M)));
        std::vector<std::vector<cplx>> c(nt, std::vector<cplx>(static_cast<std::size_t>(M)));
        for (std::size_t i = 0; i < nt; ++i) {
            for (int m = 0; m < M; ++m) {
                cplx rs{0.0, 0.0};
                cplx cs{0.0, 0.0};
                for (int k = 0; k < M; ++k) {
                    rs += a_theta[i][static_cast<std::size_t>(k)] * w_matched_[static_cast<std::size_t>(k * M + m)];
                    cs += w_matched_[static_cast<std::size_t>(m * M + k)] * std::conj(a_theta[i][static_cast<std::size_t>(k)]);
                }
                r[i][static_cast<std::size_t>(m)] = rs;
                c[i][static_cast<std::size_t>(m)] = cs;
            }
        }
        const double cell = grid_.d_theta * grid_.d_theta_p;
        const long n_points = static_cast<long>(nt * nt);
        const double sum = reduce_points(n_points, G, want_grad, out.grad[0], [&](long p, double* g) {
            const auto i1 = static_cast<std::size_t>(p) / nt;
            const auto i2 = static_cast<std::size_t>(p) % nt;
            cplx t[64];
            cplx u[64];
            std::vector<cplx> tv;
            std::vector<cplx> uv;
            cplx* tp = t;
            cplx* up = u;
            if (M > 64) {
                tv.resize(static_cast<std::size_t>(M));
                uv.resize(static_cast<std::size_t>(M));
                tp = tv.data();
                up = uv.data();
            }
            for (int m = 0; m < M; ++m) {
                tp[m] = a_theta[i1][static_cast<std::size_t>(m)] * c[i2][static_cast<std::size_t>(m)];
                up[m] = r[i1][static_cast<std::size_t>(m)] * std::conj(a_theta[i2][static_cast<std::size_t>(m)]);
            }
            return point_value(tp, up, M, sin_theta[i1], sin_theta[i2], g);
        });
        out.terms.f1 = sum * cell;
        if (want_grad)
            for (double& gk : out.grad[0]) gk *= cell;
    }

    // Doppler (j = 1) and delay (j = 2) terms share the matched-angle structure.
    for (int j = 1; j <= 2; ++j) {
        if (!mask[static_cast<std::size_t>(j)]) continue;
        const auto& table = j == 1 ? w_doppler_ : w_delay_;
        const double axis_cell = j == 1 ? dv_norm_ : dtau_norm_;

        std::vector<std::vector<cplx>> single_a;
        std::vector<double> single_s;
        const std::vector<std::vector<cplx>>* angles = &a_theta;
        const std::vector<double>* sines = &sin_theta;
        double cell = axis_cell * grid_.d_theta;
        if (grid_.theta_mode == ThetaMode::single) {
            single_a = {steering(x, grid_.theta_eval)};
            single_s = {std::sin(grid_.theta_eval)};
            angles = &single_a;
            sines = &single_s;
            cell = axis_cell;
        }
        const std::size_t n_inner = table.size();
        const long n_points = static_cast<long>(angles->size() * n_inner);
        const double sum = reduce_points(n_points, G, want_grad, out.grad[static_cast<std::size_t>(j)], [&](long p, double* g) {
            const auto ia = static_cast<std::size_t>(p) / n_inner;
            const auto iw = static_cast<std::size_t>(p) % n_inner;
            const auto& a = (*angles)[ia];
            const auto& w = table[iw];
            std::vector<cplx> t(static_cast<std::size_t>(M));
            std::vector<cplx> u(static_cast<std::size_t>(M));
            for (int m = 0; m < M; ++m) {
                cplx cs{0.0, 0.0};
                cplx rs{0.0, 0.0};
                for (int k = 0; k < M; ++k) {
                    cs += w[static_cast<std::size_t>(m * M + k)] * std::conj(a[static_cast<std::size_t>(k)]);
                    rs += a[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(k * M + m)];
                }
                t[static_cast<std::size_t>(m)] = a[static_cast<std::size_t>(m)] * cs;
                u[static_cast<std::size_t>(m)] = rs * std::conj(a[static_cast<std::size_t>(m)]);
            }
            const double s = (*sines)[ia];
            return point_value(t.data(), u.data(), M, s, s, g);
        });
        const double value = sum * cell;
        if (want_grad)
            for (double& gk : out.grad[static_cast<std::size_t>(j)]) gk *= cell;
        (j == 1 ? out.terms.f2 : out.terms.f3) = value;
    }

    out.terms.f = grid_.alpha[0] * out.terms.f1 + grid_.alpha[1] * out.terms.f2 + grid_.alpha[2] * out.terms.f3;
    return out;
}

ObjectiveTerms Objective::terms(std::span<const double> spacings) const
{
    return evaluate(spacings, {true, true, true}, false).terms;
}

double Objective::value(std::span<const double> spacings) const
{
    const auto& a = grid_.alpha;
    return evaluate(spacings, {a[0] != 0.0, a[1] != 0.0, a[2] != 0.0}, false).terms.f;
}

std::vector<double> Objective::gradient(std::span<const double> spacings) const
{
    const auto& a = grid_.alpha;
    const auto res = evaluate(spacings, {a[0] != 0.0, a[1] != 0.0, a[2] != 0.0}, true);
    std::vector<double> g(static_cast<std::size_t>(M_ - 1), 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
        if (a[j] == 0.0) continue;
        for (std::size_t k = 0; k < g.size(); ++k) g[k] += a[j] * res.grad[j][k];
    }
    return g;
}

double f1_bar(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code, const RadarConfig& cfg)
{
    return Objective(grid, code, cfg).evaluate(layout.spacings(), {true, false, false}, false).terms.f1;
}

double f2_bar(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code, const RadarConfig& cfg)
{
    return Objective(grid, code, cfg).evaluate(layout.spacings(), {false, true, false}, false).terms.f2;
}

double f3_bar(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code, const RadarConfig& cfg)
{
    return Objective(grid, code, cfg).evaluate(layout.spacings(), {false, false, true}, false).terms.f3;
}

double f_weighted(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code, const RadarConfig& cfg)
{
    return Objective(grid, code, cfg).value(layout.spacings());
}

std::vector<double> grad_f_weighted(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code,
                                    const RadarConfig& cfg)
{
    return Objective(grid, code, cfg).gradient(layout.spacings());
}

FiniteDiffGradient finite_diff_grad(const DifferentiableObjective& objective, std::span<const double> spacings,
                                    double aperture_budget, double h)
{
    require(h > 0.0, "finite-difference step must be positive");
    FiniteDiffGradient out;
    out.gradient.resize(spacings.size());
    std::vector<double> probe(spacings.begin(), spacings.end());
    for (std::size_t i = 0; i < spacings.size(); ++i) {
        probe[i] = spacings[i] + h;
        if (!is_feasible(probe, aperture_budget, 0.0)) ++out.infeasible_probes;
        const double up = objective.value(probe);
        probe[i] = spacings[i] - h;
        if (!is_feasible(probe, aperture_budget, 0.0)) ++out.infeasible_probes;
        const double down = objective.value(probe);
        probe[i] = spacings[i];
        out.gradient[i] = (up - down) / (2.0 * h);
    }
    return out;
}

FiniteDiffGradient finite_diff_grad(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code,
                                    const RadarConfig& cfg, double h)
{
    const Objective objective(grid, code, cfg);
    return finite_diff_grad(objective, layout.spacings(), layout.aperture_budget(), h);
}

} // namespace mafh
