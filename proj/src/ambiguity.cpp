#include "mafh/ambiguity.hpp"

#include "mafh/error.hpp"

#include <algorithm>
#include <cmath>

namespace mafh {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

void check_shapes(const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg)
{
    require(code.num_antennas() == layout.num_antennas(), "FH code rows must match the number of antennas");
    code.check_against(cfg.K, cfg.Q);
}

// Phase of the (m, m', q, q') term that does not depend on the geometry:
// code hop offsets, the Doppler phase accumulated up to subpulse q, and the
// delay phase of the reference hop.
double waveform_phase(int c_mq, int c_mpqp, int q, double tau, double v, const RadarConfig& cfg)
{
    const double q_start = q * cfg.delta_t;
    return kTwoPi * (c_mq - c_mpqp) * cfg.delta_f * q_start + kTwoPi * v * q_start
         - kTwoPi * cfg.delta_f * c_mpqp * tau;
}

} // namespace

double sinc(double x)
{
    if (x == 0.0) return 1.0;
    const double px = kPi * x;
    return std::sin(px) / px;
}

cplx chi_r(double tau, double v, double delta_t)
{
    const double overlap = delta_t - std::abs(tau);
    if (overlap <= 0.0) return {0.0, 0.0};
    const double amplitude = overlap / delta_t * sinc(v * overlap);
    return std::polar(amplitude, kPi * v * (delta_t - tau));
}

cplx chi(const AmbiguityQuery& qry, const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg)
{
    check_shapes(layout, code, cfg);
    const int M = layout.num_antennas();
    const int Q = cfg.Q;
    const auto x = layout.positions();
    const double s = std::sin(qry.theta);
    const double sp = std::sin(qry.theta_p);

    cplx total{0.0, 0.0};
    for (int m = 0; m < M; ++m) {
        for (int mp = 0; mp < M; ++mp) {
            const cplx geometry = std::polar(1.0, kTwoPi * (x[m] * s - x[mp] * sp));
            cplx pair{0.0, 0.0};
            for (int q = 0; q < Q; ++q) {
                for (int qp = 0; qp < Q; ++qp) {
                    const double tau_r = qry.tau - (qp - q) * cfg.delta_t;
                    if (std::abs(tau_r) >= cfg.delta_t) continue;
                    const int c = code(m, q);
                    const int cp = code(mp, qp);
                    const double v_r = qry.v - (cp - c) * cfg.delta_f;
                    pair += chi_r(tau_r, v_r, cfg.delta_t)
                          * std::polar(1.0, waveform_phase(c, cp, q, qry.tau, qry.v, cfg));
                }
            }
            total += pair * geometry;
        }
    }
    return total / static_cast<double>(Q);
}

std::vector<cplx> waveform_cross_terms(double tau, double v, const FhCode& code, const RadarConfig& cfg)
{
    code.check_against(cfg.K, cfg.Q);
    const int M = code.num_antennas();
    const int Q = cfg.Q;
    std::vector<cplx> w(static_cast<std::size_t>(M * M), cplx{0.0, 0.0});
    for (int q = 0; q < Q; ++q) {
        for (int qp = 0; qp < Q; ++qp) {
            const double tau_r = tau - (qp - q) * cfg.delta_t;
            if (std::abs(tau_r) >= cfg.delta_t) continue;
            for (int m = 0; m < M; ++m) {
                for (int mp = 0; mp < M; ++mp) {
                    const int c = code(m, q);
                    const int cp = code(mp, qp);
                    const double v_r = v - (cp - c) * cfg.delta_f;
                    w[static_cast<std::size_t>(m * M + mp)] +=
                        chi_r(tau_r, v_r, cfg.delta_t) * std::polar(1.0, waveform_phase(c, cp, q, tau, v, cfg));
                }
            }
        }
    }
    for (cplx& value : w) value /= static_cast<double>(Q);
    return w;
}

cplx chi_angular(double theta, double theta_p, const AntennaLayout& layout)
{
    const double u = std::sin(theta) - std::sin(theta_p);
    cplx total{0.0, 0.0};
    for (double xm : layout.positions()) total += std::polar(1.0, kTwoPi * u * xm);
    return total;
}

cplx chi_angular(double theta, double theta_p, const AntennaLayout& layout, const RadarConfig& cfg)
{
    require(cfg.orthogonal_hops(),
            "angular simplification requires delta_f * delta_t to be a positive integer");
    return chi_angular(theta, theta_p, layout);
}

double chi_mag_sq(const AmbiguityQuery& qry, const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg)
{
    check_shapes(layout, code, cfg);
    const int M = layout.num_antennas();
    const int Q = cfg.Q;
    const auto x = layout.positions();
    const double s = std::sin(qry.theta);
    const double sp = std::sin(qry.theta_p);

    double cx = 0.0;
    double cy = 0.0;
    for (int m = 0; m < M; ++m) {
        for (int mp = 0; mp < M; ++mp) {
            const double geometry = kTwoPi * (x[m] * s - x[mp] * sp);
            for (int q = 0; q < Q; ++q) {
                for (int qp = 0; qp < Q; ++qp) {
                    const double tau_r = qry.tau - (qp - q) * cfg.delta_t;
                    const double overlap = cfg.delta_t - std::abs(tau_r);
                    if (overlap <= 0.0) continue;
                    const int c = code(m, q);
                    const int cp = code(mp, qp);
                    const double v_r = qry.v - (cp - c) * cfg.delta_f;
                    const double eps = overlap / cfg.delta_t * sinc(v_r * overlap);
                    const double zeta = kPi * v_r * (cfg.delta_t - tau_r)
                                      + waveform_phase(c, cp, q, qry.tau, qry.v, cfg) + geometry;
                    cx += eps * std::cos(zeta);
                    cy += eps * std::sin(zeta);
                }
            }
        }
    }
    cx /= Q;
    cy /= Q;
    return cx * cx + cy * cy;
}

cplx chi_oracle(const AmbiguityQuery& qry, const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg)
{
    check_shapes(layout, code, cfg);
    const int M = layout.num_antennas();
    const int Q = cfg.Q;
    const double dt = cfg.delta_t;
    const double tau = qry.tau;
    const auto x = layout.positions();
    const double s = std::sin(qry.theta);
    const double sp = std::sin(qry.theta_p);

    const double t0 = std::min(0.0, -tau);
    const double t1 = Q * dt + std::max(0.0, tau);

    // The integrand phi_m(t) phi*_m'(t + tau) is smooth except where either
    // rectangular subpulse switches; integrate piece by piece between those
    // edges so the trapezoid rule only ever sees smooth samples.
    std::vector<double> edges{t0, t1};
    for (int q = 0; q <= Q; ++q) {
        edges.push_back(q * dt);
        edges.push_back(q * dt - tau);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [&](double a, double b) { return std::abs(a - b) <= 1e-15 * dt; }),
                edges.end());

    std::vector<cplx> geometry(static_cast<std::size_t>(M * M));
    for (int m = 0; m < M; ++m)
        for (int mp = 0; mp < M; ++mp)
            geometry[static_cast<std::size_t>(m * M + mp)] = std::polar(1.0, kTwoPi * (x[m] * s - x[mp] * sp));

    cplx total{0.0, 0.0};
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double a = std::max(edges[e], t0);
        const double b = std::min(edges[e + 1], t1);
        if (b <= a) continue;
        const double mid = 0.5 * (a + b);
        const int q = static_cast<int>(std::floor(mid / dt));
        const int qp = static_cast<int>(std::floor((mid + tau) / dt));
        if (q < 0 || q >= Q || qp < 0 || qp >= Q) continue;

        const int n = std::max(1, static_cast<int>(std::ceil((b - a) * cfg.f_s - 1e-9)));
        const double h = (b - a) / n;
        for (int m = 0; m < M; ++m) {
            const double f_tx = code(m, q) * cfg.delta_f + qry.v;
            for (int mp = 0; mp < M; ++mp) {
                const double f_ref = code(mp, qp) * cfg.delta_f;
                cplx acc{0.0, 0.0};
                for (int k = 0; k <= n; ++k) {
                    const double t = a + k * h;
                    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
                    acc += w * std::polar(1.0, kTwoPi * (f_tx * t - f_ref * (t + tau)));
                }
                total += acc * h * geometry[static_cast<std::size_t>(m * M + mp)];
            }
        }
    }
    return total / (dt * Q);
}

std::string to_string(SliceAxis axis)
{
    switch (axis) {
    case SliceAxis::angular: return "angular";
    case SliceAxis::doppler: return "doppler";
    case SliceAxis::delay: return "delay";
    }
    return "unknown";
}

SliceAxis slice_axis_from_string(const std::string& name)
{
    if (name == "angular") return SliceAxis::angular;
    if (name == "doppler") return SliceAxis::doppler;
    if (name == "delay") return SliceAxis::delay;
    throw Error("unknown slice axis '" + name + "' (expected angular, doppler or delay)");
}

namespace {

std::vector<double> slice_grid(double lo, double hi, int n_points, double matched)
{
    require(n_points >= 2, "a slice needs at least two points");
    require(hi > lo, "empty slice range");
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    const double step = (hi - lo) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) grid[static_cast<std::size_t>(i)] = lo + i * step;
    grid.back() = hi;
    if (matched >= lo && matched <= hi) {
        auto it = std::lower_bound(grid.begin(), grid.end(), matched);
        const double tol = 1e-12 * (hi - lo);
        const bool on_grid = (it != grid.end() && std::abs(*it - matched) <= tol)
                          || (it != grid.begin() && std::abs(*(it - 1) - matched) <= tol);
        if (on_grid) {
            if (it != grid.end() && std::abs(*it - matched) <= tol) *it = matched;
            else *(it - 1) = matched;
        } else {
            grid.insert(it, matched);
        }
    }
    return grid;
}

SliceMeta make_meta(const AntennaLayout& layout, const AmbiguityQuery& fixed)
{
    SliceMeta meta;
    meta.spacings.assign(layout.spacings().begin(), layout.spacings().end());
    meta.aperture_budget = layout.aperture_budget();
    meta.fixed = fixed;
    return meta;
}

} // namespace

AmbiguitySlice slice(SliceAxis axis, const AmbiguityQuery& fixed, double lo, double hi, int n_points,
                     const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg)
{
    check_shapes(layout, code, cfg);
    const double matched = axis == SliceAxis::angular ? fixed.theta : 0.0;

    AmbiguitySlice out;
    out.axis = axis;
    out.coords = slice_grid(lo, hi, n_points, matched);
    out.values.resize(out.coords.size());
    out.meta = make_meta(layout, fixed);
    out.meta.code = code.rows();
    out.meta.cfg = cfg;

    const auto n = static_cast<long>(out.coords.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        AmbiguityQuery q = fixed;
        const double c = out.coords[static_cast<std::size_t>(i)];
        switch (axis) {
        case SliceAxis::angular: q.tau = 0.0; q.v = 0.0; q.theta_p = c; break;
        case SliceAxis::doppler: q.tau = 0.0; q.v = c; q.theta_p = q.theta; break;
        case SliceAxis::delay: q.tau = c; q.v = 0.0; q.theta_p = q.theta; break;
        }
        out.values[static_cast<std::size_t>(i)] = std::abs(chi(q, layout, code, cfg));
    }
    return out;
}

AmbiguitySlice angular_slice(double theta, double lo, double hi, int n_points, const AntennaLayout& layout)
{
    AmbiguitySlice out;
    out.axis = SliceAxis::angular;
    out.coords = slice_grid(lo, hi, n_points, theta);
    out.values.resize(out.coords.size());
    out.meta = make_meta(layout, AmbiguityQuery{0.0, 0.0, theta, theta});
    const auto n = static_cast<long>(out.coords.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        out.values[static_cast<std::size_t>(i)] = std::abs(chi_angular(theta, out.coords[static_cast<std::size_t>(i)], layout));
    }
    return out;
}

} // namespace mafh
