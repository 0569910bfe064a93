#include "mafh/ambiguity.hpp"
#include "mafh/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace mafh;

namespace {

RadarConfig small_config(int Q, int K)
{
    RadarConfig cfg = default_config();
    cfg.Q = Q;
    cfg.K = K;
    cfg.T_w = Q * cfg.delta_t;
    cfg.f_s = 1.6e9;
    return validate_config(cfg);
}

} // namespace

TEST_CASE("sinc is normalized")
{
    CHECK(sinc(0.0) == 1.0);
    CHECK(std::abs(sinc(1.0)) < 1e-15);
    CHECK(std::abs(sinc(-3.0)) < 1e-15);
    CHECK(sinc(0.5) == doctest::Approx(2.0 / kPi));
}

TEST_CASE("subpulse kernel")
{
    const double dt = 1e-6;
    CHECK(std::abs(chi_r(0.0, 0.0, dt) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(chi_r(dt, 3e5, dt)) == 0.0);
    CHECK(std::abs(chi_r(-dt, 3e5, dt)) == 0.0);
    // Reference value from direct integration of the rectangular subpulse.
    const cplx half = chi_r(dt / 2.0, 1.0 / dt, dt);
    CHECK(std::abs(half) == doctest::Approx(0.318309886).epsilon(1e-8));
    CHECK(std::arg(half) == doctest::Approx(kPi / 2.0).epsilon(1e-12));
}

TEST_CASE("matched point equals M_t")
{
    const RadarConfig cfg = validate_config(default_config());
    const FhCode code = generate_fh_code(cfg, 8, 0);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const AntennaLayout l = random_feasible_layout(8, 7.0, s);
        for (double th : {-1.2, 0.0, 0.7}) {
            const cplx c = chi({0.0, 0.0, th, th}, l, code, cfg);
            CHECK(std::abs(c - cplx(8.0, 0.0)) < 1e-12);
            CHECK(chi_mag_sq({0.0, 0.0, th, th}, l, code, cfg) == doctest::Approx(64.0));
        }
    }
}

TEST_CASE("two-element null")
{
    const RadarConfig cfg = validate_config(default_config());
    const FhCode code = generate_fh_code(cfg, 2, 0);
    const AntennaLayout l = equidistant_layout(2);
    CHECK(std::abs(chi({0.0, 0.0, 0.0, kPi / 2.0}, l, code, cfg)) < 1e-12);
    CHECK(std::abs(chi_angular(0.0, kPi / 2.0, l)) < 1e-12);
    CHECK(std::abs(chi_angular(0.4, 0.4, l) - cplx(2.0, 0.0)) < 1e-15);
}

TEST_CASE("angular form agrees with the closed form under orthogonal hops")
{
    const RadarConfig cfg = validate_config(default_config());
    const FhCode code = generate_fh_code(cfg, 8, 0);
    const AntennaLayout l = equidistant_layout(8);
    for (double thp = -1.5; thp <= 1.5; thp += 0.25) {
        const cplx a = chi_angular(0.3, thp, l, cfg);
        const cplx c = chi({0.0, 0.0, 0.3, thp}, l, code, cfg);
        CHECK(std::abs(a - c) < 1e-12);
        // Geometric sum for lambda/2 spacing.
        const double u = std::sin(0.3) - std::sin(thp);
        cplx g{0.0, 0.0};
        for (int m = 0; m < 8; ++m) g += std::polar(1.0, kPi * m * u);
        CHECK(std::abs(a - g) < 1e-12);
    }
    RadarConfig odd = cfg;
    odd.delta_f = 1.5e6;
    odd.f_s = 1.6e9;
    CHECK_THROWS_AS(chi_angular(0.0, 0.1, l, odd), Error);
}

TEST_CASE("angular conjugate symmetry")
{
    const AntennaLayout l = random_feasible_layout(6, 8.0, 4);
    for (double a : {-1.0, 0.2, 1.3})
        for (double b : {-0.5, 0.0, 0.9}) CHECK(std::abs(chi_angular(a, b, l) - std::conj(chi_angular(b, a, l))) < 1e-12);
}

TEST_CASE("magnitude decomposition matches the closed form")
{
    const RadarConfig cfg = validate_config(default_config());
    const FhCode code = generate_fh_code(cfg, 8, 3);
    const AntennaLayout l = random_feasible_layout(8, 7.0, 8);
    for (double tau : {-4.3e-6, -0.2e-6, 0.0, 1.5e-6, 5.9e-6})
        for (double v : {-9e6, -0.3e6, 0.0, 2.2e6})
            for (double th : {-0.8, 1.0}) {
                const AmbiguityQuery q{tau, v, th, 0.3};
                const double want = std::norm(chi(q, l, code, cfg));
                CHECK(chi_mag_sq(q, l, code, cfg) == doctest::Approx(want).epsilon(1e-10));
            }
}

TEST_CASE("peak dominance and delay support")
{
    const RadarConfig cfg = validate_config(default_config());
    const FhCode code = generate_fh_code(cfg, 8, 0);
    const AntennaLayout l = random_feasible_layout(8, 7.0, 1);
    for (double tau = -7e-6; tau <= 7e-6; tau += 0.37e-6)
        for (double v = -1e7; v <= 1e7; v += 1.3e6) {
            const double mag = std::abs(chi({tau, v, 0.4, -0.2}, l, code, cfg));
            CHECK(mag <= 8.0 + 1e-9);
            if (std::abs(tau) >= cfg.Q * cfg.delta_t) CHECK(mag == 0.0);
        }
    CHECK(chi_mag_sq({6e-6, 1e5, 0.1, 0.1}, l, code, cfg) == 0.0);
}

TEST_CASE("closed form matches the sampled-waveform oracle")
{
    const RadarConfig cfg = small_config(2, 4);
    const FhCode code = generate_fh_code(cfg, 2, 0);
    const AntennaLayout l({1.3}, 3.0);
    double worst = 0.0;
    for (double tau : {-1.7e-6, -0.6e-6, 0.0, 0.35e-6, 1.2e-6})
        for (double v : {-8e6, -1e6, 0.0, 0.45e6, 7e6}) {
            const AmbiguityQuery q{tau, v, 0.5, -0.3};
            worst = std::max(worst, std::abs(chi(q, l, code, cfg) - chi_oracle(q, l, code, cfg)));
        }
    CHECK(worst <= 1e-4 * 2);
}

TEST_CASE("oracle basics")
{
    const RadarConfig cfg = validate_config(default_config());
    const FhCode code = generate_fh_code(cfg, 8, 0);
    const AntennaLayout l = equidistant_layout(8);
    CHECK(std::abs(chi_oracle({0.0, 0.0, 0.2, 0.2}, l, code, cfg) - cplx(8.0, 0.0)) < 1e-4);

    RadarConfig one = small_config(1, 1);
    const FhCode single(std::vector<std::vector<int>>{{1}});
    const cplx o = chi_oracle({one.delta_t / 2.0, 0.0, 0.0, 0.0}, AntennaLayout::single_element(), single, one);
    // The oracle carries the hop carrier phase; the subpulse kernel alone does not.
    CHECK(std::abs(std::abs(o) - std::abs(chi_r(one.delta_t / 2.0, 0.0, one.delta_t))) < 1e-4);
    CHECK(std::abs(o - chi({one.delta_t / 2.0, 0.0, 0.0, 0.0}, AntennaLayout::single_element(), single, one)) < 1e-4);
}

TEST_CASE("integer Doppler kills the self terms; residual matches the oracle")
{
    RadarConfig cfg = small_config(2, 4);
    const FhCode code = generate_fh_code(cfg, 2, 5);
    const AntennaLayout l({0.9}, 2.0);
    const AmbiguityQuery q{0.0, 1.0 / cfg.delta_t, 0.6, 0.6};
    CHECK(std::abs(chi(q, l, code, cfg) - chi_oracle(q, l, code, cfg)) < 1e-4);
}

TEST_CASE("slices include the matched coordinate and peak there")
{
    const RadarConfig cfg = validate_config(default_config());
    const FhCode code = generate_fh_code(cfg, 8, 0);
    const AntennaLayout l = equidistant_layout(8);
    const AmbiguitySlice s = slice(SliceAxis::angular, {0.0, 0.0, 0.0, 0.0}, -kPi / 2.0, kPi / 2.0, 100, l, code, cfg);
    for (std::size_t i = 1; i < s.coords.size(); ++i) CHECK(s.coords[i] > s.coords[i - 1]);
    double peak = 0.0;
    double at_zero = -1.0;
    for (std::size_t i = 0; i < s.coords.size(); ++i) {
        peak = std::max(peak, s.values[i]);
        if (s.coords[i] == 0.0) at_zero = s.values[i];
    }
    CHECK(at_zero == doctest::Approx(8.0));
    CHECK(peak == doctest::Approx(8.0));

    const AmbiguitySlice d = slice(SliceAxis::delay, {0.0, 0.0, 0.3, 0.3}, -8e-6, 8e-6, 161, l, code, cfg);
    for (std::size_t i = 0; i < d.coords.size(); ++i)
        if (std::abs(d.coords[i]) >= 6e-6) CHECK(d.values[i] == 0.0);
    CHECK(to_string(slice_axis_from_string("doppler")) == "doppler");
    CHECK_THROWS_AS(slice_axis_from_string("range"), Error);
    CHECK_THROWS_AS(slice(SliceAxis::delay, {}, 1.0, 1.0, 10, l, code, cfg), Error);
}

TEST_CASE("waveform cross terms reproduce chi")
{
    const RadarConfig cfg = validate_config(default_config());
    const FhCode code = generate_fh_code(cfg, 4, 2);
    const AntennaLayout l = random_feasible_layout(4, 6.0, 2);
    const auto x = l.positions();
    for (double tau : {-2.5e-6, 0.0, 0.8e-6})
        for (double v : {-3e6, 0.0, 4.4e6}) {
            const auto W = waveform_cross_terms(tau, v, code, cfg);
            cplx sum{0.0, 0.0};
            for (int m = 0; m < 4; ++m)
                for (int mp = 0; mp < 4; ++mp)
                    sum += W[static_cast<std::size_t>(m * 4 + mp)]
                         * std::polar(1.0, 2.0 * kPi * (x[static_cast<std::size_t>(m)] * std::sin(0.4)
                                                        - x[static_cast<std::size_t>(mp)] * std::sin(-0.1)));
            CHECK(std::abs(sum - chi({tau, v, 0.4, -0.1}, l, code, cfg)) < 1e-12);
        }
}
