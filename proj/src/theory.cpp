#include "mafh/theory.hpp"

#include "mafh/ambiguity.hpp"
#include "mafh/error.hpp"

#include <cmath>

namespace mafh {

AntennaLayout mmlwd_layout(int num_antennas, double aperture_budget)
{
    require(num_antennas >= 2, "MMLWD layout needs M_t >= 2");
    const double floor_sum = kMinSpacing * (num_antennas - 1);
    require(aperture_budget >= floor_sum * (1.0 - 1e-12), "infeasible aperture budget: L < (M_t - 1) / 2");

    // 1-based gap index ceil(M_t / 2) takes everything beyond the minimum.
    const int gap = (num_antennas + 1) / 2;
    std::vector<double> d(static_cast<std::size_t>(num_antennas - 1), kMinSpacing);
    d[static_cast<std::size_t>(gap - 1)] = std::max(kMinSpacing, aperture_budget - (num_antennas - 2) * kMinSpacing);
    return AntennaLayout(std::move(d), aperture_budget);
}

double b_min(int num_antennas, double aperture_budget, double theta)
{
    require(num_antennas >= 2, "b_min needs M_t >= 2");
    const double half = 2.0 / (4.0 * aperture_budget - num_antennas + 2.0);
    const double s = std::sin(theta);
    require(s + half <= 1.0 && s - half >= -1.0, "lobe exceeds visible region");
    return std::asin(s + half) - std::asin(s - half);
}

namespace {

void check_code(const FhCode& code, const RadarConfig& cfg)
{
    code.check_against(cfg.K, cfg.Q);
}

bool near_broadside(double theta)
{
    return std::abs(std::sin(theta)) < 1e-12;
}

} // namespace

TheoryBound doppler_lower_bound(std::span<const double> v_grid, const FhCode& code, const RadarConfig& cfg,
                                double theta, DopplerSelfTerm self_term)
{
    check_code(code, cfg);
    const int M = code.num_antennas();
    const int Q = cfg.Q;
    const double dt = cfg.delta_t;
    const double hop = cfg.hop_time_product();

    TheoryBound out;
    out.axis = BoundAxis::doppler;
    out.coords.assign(v_grid.begin(), v_grid.end());
    out.lower.resize(out.coords.size());
    out.uninformative = near_broadside(theta);

    for (std::size_t i = 0; i < out.coords.size(); ++i) {
        const double vdt = out.coords[i] * dt;
        double self = M * std::abs(sinc(vdt));
        if (self_term == DopplerSelfTerm::subpulse_coherent) {
            cplx progression{0.0, 0.0};
            for (int q = 0; q < Q; ++q) progression += std::polar(1.0, 2.0 * kPi * vdt * q);
            self *= std::abs(progression) / Q;
        }
        double cross = 0.0;
        for (int m = 0; m < M; ++m) {
            for (int mp = 0; mp < M; ++mp) {
                if (m == mp) continue;
                for (int q = 0; q < Q; ++q) cross += std::abs(sinc(vdt - (code(m, q) - code(mp, q)) * hop));
            }
        }
        out.lower[i] = std::max(0.0, self - cross / Q);
    }
    return out;
}

TheoryBound delay_lower_bound(std::span<const double> tau_grid, const FhCode& code, const RadarConfig& cfg,
                              double theta)
{
    check_code(code, cfg);
    const int M = code.num_antennas();
    const int Q = cfg.Q;
    const double dt = cfg.delta_t;
    const double df = cfg.delta_f;

    TheoryBound out;
    out.axis = BoundAxis::delay;
    out.coords.assign(tau_grid.begin(), tau_grid.end());
    out.lower.resize(out.coords.size());
    out.uninformative = near_broadside(theta);

    for (std::size_t i = 0; i < out.coords.size(); ++i) {
        const double tau = out.coords[i];
        cplx upsilon{0.0, 0.0};
        double cross = 0.0;
        for (int q = 0; q < Q; ++q) {
            for (int qp = 0; qp < Q; ++qp) {
                const double tau_r = tau - (qp - q) * dt;
                if (std::abs(tau_r) >= dt) continue;
                for (int m = 0; m < M; ++m) {
                    const int c = code(m, q);
                    const int cp = code(m, qp);
                    // Hop phase is 1 when delta_f * delta_t is an integer.
                    const double phase = 2.0 * kPi * df * ((c - cp) * q * dt - cp * tau);
                    upsilon += chi_r(tau_r, (c - cp) * df, dt) * std::polar(1.0, phase);
                    for (int mp = 0; mp < M; ++mp) {
                        if (mp == m) continue;
                        cross += std::abs(chi_r(tau_r, (c - code(mp, qp)) * df, dt));
                    }
                }
            }
        }
        out.lower[i] = std::max(0.0, std::abs(upsilon) / Q - cross / Q);
    }
    return out;
}

} // namespace mafh
