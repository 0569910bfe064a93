#include "mafh/model.hpp"

#include "mafh/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace mafh {

namespace {

bool nearly_equal(double a, double b, double rel = 1e-9)
{
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace

bool RadarConfig::orthogonal_hops() const
{
    const double p = hop_time_product();
    const double r = std::round(p);
    return r >= 1.0 && std::abs(p - r) <= 1e-9 * std::max(1.0, r);
}

RadarConfig default_config()
{
    return validate_config(RadarConfig{});
}

RadarConfig validate_config(RadarConfig cfg)
{
    require(cfg.f_c > 0.0, "f_c must be positive");
    require(cfg.Q >= 1, "Q must be at least 1");
    require(cfg.K >= 1, "K must be at least 1");
    require(cfg.delta_t > 0.0, "delta_t must be positive");
    require(cfg.delta_f > 0.0, "delta_f must be positive");
    require(nearly_equal(cfg.T_w, cfg.Q * cfg.delta_t), "T_w must equal Q * delta_t");
    require(cfg.f_s >= 2.0 * cfg.K * cfg.delta_f * (1.0 - 1e-12),
            "f_s must be at least 2 * K * delta_f");
    require(cfg.T_P >= cfg.T_w * (1.0 - 1e-12), "T_P must be at least T_w");
    require(cfg.f_max > 0.0, "f_max must be positive");
    cfg.lambda = kSpeedOfLight / cfg.f_c;
    return cfg;
}

std::vector<double> positions_from_spacings(std::span<const double> spacings)
{
    std::vector<double> x(spacings.size() + 1, 0.0);
    for (std::size_t i = 0; i < spacings.size(); ++i) x[i + 1] = x[i] + spacings[i];
    return x;
}

bool is_feasible(std::span<const double> spacings, double aperture_budget, double tol)
{
    double sum = 0.0;
    for (double d : spacings) {
        if (!(d >= kMinSpacing - tol)) return false;
        sum += d;
    }
    return sum <= aperture_budget + tol;
}

AntennaLayout::AntennaLayout(std::vector<double> spacings, double aperture_budget)
    : spacings_(std::move(spacings)), budget_(aperture_budget)
{
    require(!spacings_.empty(), "a layout needs at least two antennas");
    const double tol = kLayoutTolerance * std::max(1.0, aperture_budget);
    for (std::size_t i = 0; i < spacings_.size(); ++i) {
        require(std::isfinite(spacings_[i]) && spacings_[i] >= kMinSpacing - tol,
                "spacing d_" + std::to_string(i + 1) + " is below half a wavelength");
    }
    positions_ = positions_from_spacings(spacings_);
    require(positions_.back() <= aperture_budget + tol, "sum of spacings exceeds the aperture budget L");
}

AntennaLayout AntennaLayout::single_element()
{
    AntennaLayout layout;
    layout.positions_ = {0.0};
    return layout;
}

AntennaLayout equidistant_layout(int num_antennas)
{
    return equidistant_layout(num_antennas, kMinSpacing * (num_antennas - 1));
}

AntennaLayout equidistant_layout(int num_antennas, double aperture_budget)
{
    require(num_antennas >= 2, "equidistant layout needs M_t >= 2");
    return AntennaLayout(std::vector<double>(static_cast<std::size_t>(num_antennas - 1), kMinSpacing),
                         aperture_budget);
}

AntennaLayout random_feasible_layout(int num_antennas, double aperture_budget, std::uint64_t seed)
{
    require(num_antennas >= 2, "random layout needs M_t >= 2");
    const double floor_sum = kMinSpacing * (num_antennas - 1);
    require(aperture_budget >= floor_sum * (1.0 - 1e-12), "infeasible aperture budget: L < (M_t - 1) / 2");
    const double slack = std::max(0.0, aperture_budget - floor_sum);

    // Uniform over {e >= 0, sum e <= slack}: normalized exponentials with one
    // extra coordinate absorbing the unused budget.
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(static_cast<std::size_t>(num_antennas));
    for (double& wi : w) wi = expo(rng);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);

    std::vector<double> d(static_cast<std::size_t>(num_antennas - 1));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = kMinSpacing + slack * w[i] / total;

    // Guard the budget against rounding in the accumulation.
    const double sum = std::accumulate(d.begin(), d.end(), 0.0);
    if (sum > aperture_budget) {
        const double excess = sum - aperture_budget;
        auto it = std::max_element(d.begin(), d.end());
        *it = std::max(kMinSpacing, *it - excess);
    }
    return AntennaLayout(std::move(d), aperture_budget);
}

FhCode::FhCode(std::vector<std::vector<int>> rows)
{
    require(!rows.empty() && !rows.front().empty(), "FH code must be a non-empty matrix");
    rows_ = static_cast<int>(rows.size());
    cols_ = static_cast<int>(rows.front().size());
    data_.reserve(static_cast<std::size_t>(rows_ * cols_));
    for (const auto& row : rows) {
        require(static_cast<int>(row.size()) == cols_, "FH code rows must have equal length");
        for (int c : row) {
            require(c >= 1, "FH code entries must be >= 1");
            data_.push_back(c);
        }
    }
    for (int q = 0; q < cols_; ++q) {
        for (int m = 0; m < rows_; ++m) {
            for (int mp = m + 1; mp < rows_; ++mp) {
                require((*this)(m, q) != (*this)(mp, q),
                        "FH code column " + std::to_string(q) + " repeats a hop (orthogonality violated)");
            }
        }
    }
}

int FhCode::max_hop() const
{
    return *std::max_element(data_.begin(), data_.end());
}

std::vector<std::vector<int>> FhCode::rows() const
{
    std::vector<std::vector<int>> out(static_cast<std::size_t>(rows_));
    for (int m = 0; m < rows_; ++m) {
        out[static_cast<std::size_t>(m)].assign(data_.begin() + m * cols_, data_.begin() + (m + 1) * cols_);
    }
    return out;
}

void FhCode::check_against(int K, int Q) const
{
    require(cols_ == Q, "FH code has " + std::to_string(cols_) + " columns but Q = " + std::to_string(Q));
    require(max_hop() <= K, "FH code uses a hop index above K");
    require(rows_ <= K, "M_t must not exceed K");
}

FhCode generate_fh_code(const RadarConfig& cfg, int num_antennas, std::uint64_t seed)
{
    require(num_antennas >= 1, "M_t must be positive");
    require(num_antennas <= cfg.K, "cannot build an orthogonal FH code with M_t > K");

    std::mt19937_64 rng(seed);
    std::vector<int> hops(static_cast<std::size_t>(cfg.K));
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(num_antennas),
                                       std::vector<int>(static_cast<std::size_t>(cfg.Q)));
    for (int q = 0; q < cfg.Q; ++q) {
        std::iota(hops.begin(), hops.end(), 1);
        // Fisher-Yates with explicit draws so the sequence does not depend on
        // the standard library's shuffle.
        for (int i = cfg.K - 1; i > 0; --i) {
            const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
            std::swap(hops[static_cast<std::size_t>(i)], hops[static_cast<std::size_t>(j)]);
        }
        for (int m = 0; m < num_antennas; ++m) {
            rows[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)] = hops[static_cast<std::size_t>(m)];
        }
    }
    return FhCode(std::move(rows));
}

DetectionParams validate_detection(DetectionParams det)
{
    require(det.P_fa > 0.0 && det.P_fa < 1.0, "P_fa must lie in (0, 1)");
    require(det.M_r >= 1, "M_r must be positive");
    require(det.trials_per_snr >= 1, "trials_per_snr must be positive");
    require(static_cast<double>(det.trials) >= 10.0 / det.P_fa * (1.0 - 1e-12),
            "insufficient trials for P_fa calibration (need trials >= 10 / P_fa)");
    return det;
}

} // namespace mafh
