#include "mafh/reference.hpp"

#include "mafh/error.hpp"

#include <cmath>

namespace mafh::reference {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double phase_of_hops(int c, int cp, int q, double tau, double v, const RadarConfig& cfg)
{
    const double qdt = q * cfg.delta_t;
    return kTwoPi * (c - cp) * cfg.delta_f * qdt + kTwoPi * v * qdt - kTwoPi * cfg.delta_f * cp * tau;
}

} // namespace

PointValue point(const AmbiguityQuery& qry, const AntennaLayout& layout, const FhCode& code, const RadarConfig& cfg)
{
    const int M = layout.num_antennas();
    const int Q = cfg.Q;
    require(code.num_antennas() == M && code.num_subpulses() == Q, "layout, code and config disagree");
    const auto x = layout.positions();
    const double s = std::sin(qry.theta);
    const double sp = std::sin(qry.theta_p);

    double cx = 0.0;
    double cy = 0.0;
    std::vector<double> dcx(static_cast<std::size_t>(M - 1), 0.0);
    std::vector<double> dcy(static_cast<std::size_t>(M - 1), 0.0);
    for (int m = 0; m < M; ++m) {
        for (int mp = 0; mp < M; ++mp) {
            for (int q = 0; q < Q; ++q) {
                for (int qp = 0; qp < Q; ++qp) {
                    const double tau_r = qry.tau - (qp - q) * cfg.delta_t;
                    const double overlap = cfg.delta_t - std::abs(tau_r);
                    if (overlap <= 0.0) continue;
                    const int c = code(m, q);
                    const int cp = code(mp, qp);
                    const double v_r = qry.v - (cp - c) * cfg.delta_f;
                    const double eps = overlap / cfg.delta_t * sinc(v_r * overlap);
                    const double zeta = kPi * v_r * (cfg.delta_t - tau_r) + phase_of_hops(c, cp, q, qry.tau, qry.v, cfg)
                                      + kTwoPi * (x[static_cast<std::size_t>(m)] * s - x[static_cast<std::size_t>(mp)] * sp);
                    const double re = eps * std::cos(zeta);
                    const double im = eps * std::sin(zeta);
                    cx += re;
                    cy += im;
                    // x_m = sum_{i <= m} d_i, so d_x moves x_m for every m >= x.
                    for (int xi = 1; xi < M; ++xi) {
                        const double dzeta = kTwoPi * ((xi <= m ? s : 0.0) - (xi <= mp ? sp : 0.0));
                        dcx[static_cast<std::size_t>(xi - 1)] -= im * dzeta;
                        dcy[static_cast<std::size_t>(xi - 1)] += re * dzeta;
                    }
                }
            }
        }
    }
    cx /= Q;
    cy /= Q;
    PointValue out;
    out.mag_sq = cx * cx + cy * cy;
    out.grad.resize(dcx.size());
    for (std::size_t k = 0; k < dcx.size(); ++k) out.grad[k] = 2.0 * (cx * dcx[k] + cy * dcy[k]) / Q;
    return out;
}

Evaluation evaluate(const AntennaLayout& layout, const ObjectiveGrid& grid, const FhCode& code,
                    const RadarConfig& cfg)
{
    const auto G = static_cast<std::size_t>(layout.num_antennas() - 1);
    std::array<std::vector<double>, 3> grads;
    for (auto& g : grads) g.assign(G, 0.0);
    std::array<double, 3> values{0.0, 0.0, 0.0};

    auto add = [&](int term, const AmbiguityQuery& q, double cell) {
        const auto p = point(q, layout, code, cfg);
        values[static_cast<std::size_t>(term)] += p.mag_sq * cell;
        for (std::size_t k = 0; k < G; ++k) grads[static_cast<std::size_t>(term)][k] += p.grad[k] * cell;
    };

    const double cell1 = grid.d_theta * grid.d_theta_p;
    for (double th : grid.theta_samples)
        for (double thp : grid.theta_samples) add(0, {0.0, 0.0, th, thp}, cell1);

    std::vector<double> thetas = grid.theta_samples;
    double angle_cell = grid.d_theta;
    if (grid.theta_mode == ThetaMode::single) {
        thetas = {grid.theta_eval};
        angle_cell = 1.0;
    }
    const double cell2 = angle_cell * grid.d_v * cfg.delta_t;
    const double cell3 = angle_cell * grid.d_tau / cfg.delta_t;
    for (double th : thetas) {
        for (double v : grid.v_samples) add(1, {0.0, v, th, th}, cell2);
        for (double tau : grid.tau_samples) add(2, {tau, 0.0, th, th}, cell3);
    }

    Evaluation out;
    out.terms.f1 = values[0];
    out.terms.f2 = values[1];
    out.terms.f3 = values[2];
    out.terms.f = grid.alpha[0] * values[0] + grid.alpha[1] * values[1] + grid.alpha[2] * values[2];
    out.gradient.assign(G, 0.0);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < G; ++k) out.gradient[k] += grid.alpha[j] * grads[j][k];
    return out;
}

} // namespace mafh::reference
