#include "mafh/ga.hpp"

#include "mafh/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mafh {

void validate_ga(const GaParams& params)
{
    require(params.G >= 1, "GA needs G >= 1");
    require(params.N >= 2, "GA needs N >= 2");
    require(params.p_cross >= 0.0 && params.p_cross <= 1.0, "p_cross must lie in [0, 1]");
    require(params.p_mut >= 0.0 && params.p_mut <= 1.0, "p_mut must lie in [0, 1]");
    require(params.sigma_mut >= 0.0, "mutation sigma must be non-negative");
}

std::vector<double> repair(std::vector<double> spacings, const FeasiblePolytope& poly)
{
    for (double& d : spacings) d = std::max(d, kMinSpacing);
    const double floor_sum = kMinSpacing * static_cast<double>(spacings.size());
    const double excess = std::accumulate(spacings.begin(), spacings.end(), 0.0) - floor_sum;
    const double room = std::max(0.0, poly.aperture_budget - floor_sum);
    if (excess > room) {
        const double scale = room / excess;
        for (double& d : spacings) d = kMinSpacing + (d - kMinSpacing) * scale;
        // Rounding can leave the sum a few ulps over L.
        const double over = std::accumulate(spacings.begin(), spacings.end(), 0.0) - poly.aperture_budget;
        if (over > 0.0) {
            auto it = std::max_element(spacings.begin(), spacings.end());
            *it = std::max(kMinSpacing, *it - over);
        }
    }
    return spacings;
}

GaResult ga_optimize(const DifferentiableObjective& objective, const FeasiblePolytope& poly, const GaParams& params)
{
    validate_ga(params);
    const auto n_genes = static_cast<std::size_t>(poly.A.cols());
    const auto N = static_cast<std::size_t>(params.N);
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, params.sigma_mut);
    std::exponential_distribution<double> expo(1.0);

    const double room = std::max(0.0, poly.aperture_budget - kMinSpacing * static_cast<double>(n_genes));
    std::vector<std::vector<double>> pop(N, std::vector<double>(n_genes));
    for (auto& ind : pop) {
        std::vector<double> w(n_genes + 1);
        for (double& wi : w) wi = expo(rng);
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (std::size_t i = 0; i < n_genes; ++i) ind[i] = kMinSpacing + room * w[i] / total;
        ind = repair(ind, poly);
    }

    std::vector<double> fit(N);
    auto evaluate = [&] {
        for (std::size_t i = 0; i < N; ++i) fit[i] = objective.value(pop[i]);
    };
    auto best_index = [&] { return static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin()); };

    GaResult res;
    evaluate();
    std::size_t best = best_index();
    res.best_trace.push_back(fit[best]);

    std::uniform_int_distribution<std::size_t> pick(0, N - 1);
    auto tournament = [&]() -> const std::vector<double>& {
        const std::size_t a = pick(rng);
        const std::size_t b = pick(rng);
        return pop[fit[b] < fit[a] ? b : a];
    };

    for (int gen = 1; gen < params.G; ++gen) {
        std::vector<std::vector<double>> next;
        next.reserve(N);
        next.push_back(pop[best]);
        while (next.size() < N) {
            const auto& p1 = tournament();
            const auto& p2 = tournament();
            std::vector<double> child = p1;
            if (unit(rng) < params.p_cross) {
                for (std::size_t i = 0; i < n_genes; ++i) {
                    const double beta = unit(rng);
                    child[i] = beta * p1[i] + (1.0 - beta) * p2[i];
                }
            }
            for (double& g : child)
                if (unit(rng) < params.p_mut) g += gauss(rng);
            next.push_back(repair(std::move(child), poly));
        }
        pop = std::move(next);
        evaluate();
        best = best_index();
        res.best_trace.push_back(fit[best]);
    }
    res.spacings = pop[best];
    res.f = fit[best];
    return res;
}

} // namespace mafh
