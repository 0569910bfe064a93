#include "mafh/metrics.hpp"

#include "mafh/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mafh {

namespace {

// Vertex of the parabola through three (x, y) points; falls back to the
// middle sample when the points are collinear or the vertex leaves the bracket.
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2)
{
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curvature = (d12 - d01) / (x2 - x0);
    if (!(curvature > 0.0)) return x1;
    const double vertex = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
    return std::clamp(vertex, x0, x2);
}

// First local minimum at or below the null threshold walking away from the
// peak in direction step (+1 or -1).
double find_null(const AmbiguitySlice& s, std::size_t peak, int step)
{
    const double threshold = kNullThreshold * s.values[peak];
    const auto n = static_cast<long>(s.values.size());
    for (long i = static_cast<long>(peak) + step; i > 0 && i < n - 1; i += step) {
        const long prev = i - step;
        const long next = i + step;
        const auto ui = static_cast<std::size_t>(i);
        if (s.values[ui] <= threshold && s.values[ui] <= s.values[static_cast<std::size_t>(prev)]
            && s.values[ui] <= s.values[static_cast<std::size_t>(next)]) {
            const auto lo = static_cast<std::size_t>(std::min(prev, next));
            const auto hi = static_cast<std::size_t>(std::max(prev, next));
            auto sq = [&](std::size_t k) { return s.values[k] * s.values[k]; };
            return parabola_vertex(s.coords[lo], sq(lo), s.coords[ui], sq(ui), s.coords[hi], sq(hi));
        }
    }
    throw Error("no null found within slice range");
}

} // namespace

std::size_t matched_index(const AmbiguitySlice& slice)
{
    require(!slice.coords.empty() && slice.coords.size() == slice.values.size(), "slice is empty or malformed");
    const double target = slice.axis == SliceAxis::angular ? slice.meta.fixed.theta : 0.0;
    std::size_t best = 0;
    for (std::size_t i = 1; i < slice.coords.size(); ++i)
        if (std::abs(slice.coords[i] - target) < std::abs(slice.coords[best] - target)) best = i;
    return best;
}

LobeReport lobe_report(const AmbiguitySlice& slice)
{
    const std::size_t peak = matched_index(slice);
    LobeReport r;
    r.peak_value = slice.values[peak];
    require(r.peak_value > 0.0, "slice peak is zero");
    r.left_null = find_null(slice, peak, -1);
    r.right_null = find_null(slice, peak, +1);
    r.main_lobe_width = r.right_null - r.left_null;

    double side = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < slice.coords.size(); ++i) {
        if (slice.coords[i] > r.left_null && slice.coords[i] < r.right_null) continue;
        side = std::max(side, slice.values[i]);
        any = true;
    }
    r.psl_db = any && side > 0.0 ? 20.0 * std::log10(side / r.peak_value) : -300.0;
    return r;
}

double main_lobe_width(const AmbiguitySlice& slice)
{
    return lobe_report(slice).main_lobe_width;
}

double peak_sidelobe_level(const AmbiguitySlice& slice)
{
    return lobe_report(slice).psl_db;
}

BoundGap bound_gap(const AmbiguitySlice& slice, const TheoryBound& bound)
{
    require(slice.coords.size() == bound.coords.size() && !slice.coords.empty(), "slice and bound grids differ");
    BoundGap g;
    g.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < slice.coords.size(); ++i) {
        const double scale = std::max(1.0, std::abs(slice.coords[i]));
        require(std::abs(slice.coords[i] - bound.coords[i]) <= 1e-12 * scale, "slice and bound grids differ");
        const double gap = slice.values[i] - bound.lower[i];
        g.min_gap = std::min(g.min_gap, gap);
        if (gap < -1e-6) ++g.violation_count;
    }
    return g;
}

double spearman(std::span<const double> x, std::span<const double> y)
{
    require(x.size() == y.size() && x.size() >= 2, "spearman needs two equal-length samples of size >= 2");
    auto ranks = [](std::span<const double> v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    require(sxx > 0.0 && syy > 0.0, "spearman undefined for a constant sample");
    return sxy / std::sqrt(sxx * syy);
}

} // namespace mafh
