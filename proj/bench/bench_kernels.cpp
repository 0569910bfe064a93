// Serial reference vs tabulated parallel kernel for the weighted objective
// and its gradient on the default X-band setup (M_t = 8, L = 7).
#include "mafh/objective.hpp"
#include "mafh/parallel.hpp"
#include "mafh/reference.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

using namespace mafh;

namespace {

template <typename F>
double seconds(F&& f, int reps)
{
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

} // namespace

int main(int argc, char** argv)
{
    const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
    const RadarConfig cfg = default_config();
    const FhCode code = generate_fh_code(cfg, 8, 0);
    const AntennaLayout layout = random_feasible_layout(8, 7.0, 11);
    const ObjectiveGrid grid = build_grid(cfg, layout, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    std::printf("grid n1=%d n2=%d n3=%d, reps=%d\n", grid.n1, grid.n2, grid.n3, reps);

    reference::Evaluation ref;
    const double t_ref = seconds([&] { ref = reference::evaluate(layout, grid, code, cfg); }, 1);
    std::printf("%-28s %10.4f s\n", "serial reference", t_ref);

    const double t_setup = seconds([&] { Objective o(grid, code, cfg); }, reps);
    std::printf("%-28s %10.4f s\n", "kernel tabulation", t_setup);

    const Objective obj(grid, code, cfg);
    const int max_t = max_threads();
    std::vector<int> counts;
    for (int t = 1; t < max_t; t *= 2) counts.push_back(t);
    counts.push_back(max_t);
    for (int t : counts) {
        set_threads(t);
        std::vector<double> g;
        double f = 0.0;
        const double dt = seconds([&] { f = obj.value(layout.spacings()); g = obj.gradient(layout.spacings()); }, reps);
        double err = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k)
            err = std::max(err, std::abs(g[k] - ref.gradient[k]) / std::max(1e-300, std::abs(ref.gradient[k])));
        std::printf("kernel threads=%-2d %18.4f s  speedup %6.1fx  |df|/f=%.1e  grad rel err=%.1e\n", t, dt,
                    t_ref / dt, std::abs(f - ref.terms.f) / ref.terms.f, err);
    }
    return 0;
}
