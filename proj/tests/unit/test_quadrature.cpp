#include <cmath>
#include <numbers>
#include <vector>

#include "adaptive_quad.hpp"
#include "doctest.h"
#include "semiwell/errors.hpp"
#include "semiwell/potential.hpp"
#include "semiwell/quadrature.hpp"

using namespace semiwell;

namespace {
const PhysicalScale kUnit(1.0);
const QuadratureConfig kCfg{};

Well tanh12() { return make_builtin("tanh2", {{"U", 12.0}}); }
Well harmonic() { return make_builtin("harmonic", {}); }
Well gauss1() { return make_builtin("gauss", {{"U", 1.0}, {"w", 1.0}}); }
} // namespace

TEST_SUITE("quadrature") {

TEST_CASE("turning points of the harmonic well") {
    const TurningPoints tp = turning_points(harmonic(), 4.0, kCfg);
    CHECK(tp.x_plus == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(tp.x_minus == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(!tp.at_infinity_plus);
}

TEST_CASE("turning points of tanh2") {
    const Well w = tanh12();
    const TurningPoints tp = turning_points(w, 3.0, kCfg);
    const double expect = std::atanh(0.5); // 12 tanh^2 x = 3
    CHECK(tp.x_plus == doctest::Approx(expect).epsilon(1e-10));
    CHECK(tp.x_minus == doctest::Approx(-expect).epsilon(1e-10));
    CHECK(std::abs(w.value(tp.x_plus) - 3.0) < 1e-12 * 3.0);
    // classically allowed between the turning points
    for (int i = 1; i < 40; ++i) {
        const double x = tp.x_minus + (tp.x_plus - tp.x_minus) * i / 40.0;
        CHECK(w.value(x) < 3.0);
    }
}

TEST_CASE("turning points at the asymptote") {
    const TurningPoints tp = turning_points(tanh12(), 12.0, kCfg);
    CHECK(tp.at_infinity_minus);
    CHECK(tp.at_infinity_plus);
}

TEST_CASE("turning point errors") {
    CHECK_THROWS_AS(turning_points(tanh12(), -0.5, kCfg), numeric_error);
    CHECK_THROWS_AS(turning_points(tanh12(), 0.0, kCfg), numeric_error);
    CHECK_THROWS_AS(turning_points(tanh12(), 12.5, kCfg), numeric_error);
    QuadratureConfig bad = kCfg;
    bad.n_nodes = 8;
    CHECK_THROWS_AS(turning_points(harmonic(), 1.0, bad), std::invalid_argument);
}

TEST_CASE("phase integral of the harmonic well is eps/2") {
    const Well w = harmonic();
    for (double eps : {0.5, 1.0, 3.0, 9.0})
        CHECK(phase_integral(w, eps, kUnit, kCfg) ==
              doctest::Approx(0.5 * eps).epsilon(1e-12));
    CHECK(phase_integral(w, 3.0, PhysicalScale(2.0), kCfg) ==
          doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("phase integral of tanh2 matches sqrt(U) - sqrt(U - eps)") {
    const Well w = tanh12();
    for (double eps : {1.0, 3.0, 6.0, 11.0})
        CHECK(phase_integral(w, eps, kUnit, kCfg) ==
              doctest::Approx(std::sqrt(12.0) - std::sqrt(12.0 - eps)).epsilon(1e-10));
}

TEST_CASE("phase integral at the asymptote") {
    CHECK(phase_integral(tanh12(), 12.0, kUnit, kCfg) ==
          doctest::Approx(std::sqrt(12.0)).epsilon(1e-10));
    // gauss: integral of sqrt(U) exp(-x^2/2) is sqrt(2 pi U)
    CHECK(phase_integral(gauss1(), 1.0, kUnit, kCfg) ==
          doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-10));
}

TEST_CASE("phase integral vanishes at the bottom") {
    CHECK(phase_integral(harmonic(), 0.0, kUnit, kCfg) == 0.0);
    const Well w = tanh12();
    CHECK(phase_integral(w, 1e-8 * 12.0, kUnit, kCfg) < 1e-4);
}

TEST_CASE("phase integral is strictly increasing") {
    for (const Well& w : {tanh12(), gauss1()}) {
        const double U = *w.asymptote();
        double prev = 0.0;
        for (int i = 1; i <= 20; ++i) {
            const double eps = U * i / 21.0;
            const double phi = phase_integral(w, eps, kUnit, kCfg);
            CHECK(phi > prev);
            prev = phi;
        }
    }
    for (const Well& w : {harmonic(), make_builtin("quartic", {})}) {
        double prev = 0.0;
        for (int i = 1; i <= 20; ++i) {
            const double phi = phase_integral(w, i, kUnit, kCfg);
            CHECK(phi > prev);
            prev = phi;
        }
    }
}

TEST_CASE("midpoint sums converge at fourth order or better per doubling") {
    // raw fixed-N midpoint sums over the cos-substituted integrand; the
    // finest sum must also agree with the production value
    const Well w = tanh12();
    const double eps = 6.0;
    const TurningPoints tp = turning_points(w, eps, kCfg);
    const double xm = 0.5 * (tp.x_plus + tp.x_minus), xh = 0.5 * (tp.x_plus - tp.x_minus);
    auto sum_at = [&](int n) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            const double th = (j + 0.5) * std::numbers::pi / n;
            const double x = xm + xh * std::cos(th);
            s += std::sqrt(std::max(eps - w.value(x), 0.0)) * xh * std::sin(th);
        }
        return s * std::numbers::pi / n / (std::numbers::pi);
    };
    const double s32 = sum_at(32), s64 = sum_at(64), s128 = sum_at(128), s256 = sum_at(256);
    const double d1 = std::abs(s64 - s32), d2 = std::abs(s128 - s64), d3 = std::abs(s256 - s128);
    if (d2 > 1e-13 * std::abs(s64)) CHECK(d1 / d2 >= 4.0);
    if (d3 > 1e-13 * std::abs(s128)) CHECK(d2 / d3 >= 4.0);
    CHECK(phase_integral(w, eps, kUnit, kCfg) == doctest::Approx(s256).epsilon(1e-9));
}

TEST_CASE("singular integral of the harmonic well at eps = 1 is 2 pi") {
    CHECK(singular_integral(harmonic(), 1.0, kCfg) ==
          doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-11));
}

TEST_CASE("singular integral agrees with the adaptive reference") {
    const Well w = tanh12();
    const double mine = singular_integral(w, 3.0, kCfg);
    const double ref = refquad::singular_reference(w, 3.0);
    CHECK(mine == doctest::Approx(ref).epsilon(1e-8));
    // frozen from an independent high-precision run
    CHECK(mine == doctest::Approx(53.05363140385087).epsilon(1e-9));
}

TEST_CASE("singular integral vanishes toward the bottom") {
    CHECK(std::abs(singular_integral(harmonic(), 1e-6, kCfg)) < 1e-4);
}

TEST_CASE("degenerate turning point is a hard error") {
    // (x^2 - 1)^2 near its right minimum: at eps = 1 the inner turning
    // point sits on the local maximum at x = 0 where V' = 0
    const Well w("degenerate", {},
                 [](double x) { const double t = x * x - 1.0; return t * t; },
                 [](double x) { return 4.0 * x * (x * x - 1.0); },
                 1.0, 0.0, std::nullopt, std::nullopt);
    CHECK_THROWS_AS(singular_integral(w, 1.0, kCfg), numeric_error);
}

TEST_CASE("singular integral needs finite turning points") {
    CHECK_THROWS_AS(singular_integral(tanh12(), 12.0, kCfg), numeric_error);
}

TEST_CASE("non-convergence reports the last two estimates") {
    QuadratureConfig tight = kCfg;
    tight.n_nodes = 32;
    tight.refine_limit = 1;
    CHECK_THROWS_WITH_AS(phase_integral(gauss1(), 0.5, kUnit, tight),
                         doctest::Contains("last two estimates"), numeric_error);
}

TEST_CASE("divergent improper phase integral is detected") {
    // U - V = U / (1 + x^2): sqrt tail ~ 1/x, not truncatable
    const Well w("lorentz_tail", {},
                 [](double x) { return 1.0 - 1.0 / (1.0 + x * x); },
                 [](double x) { const double d = 1.0 + x * x; return 2.0 * x / (d * d); },
                 0.0, 0.0, 1.0, std::nullopt);
    CHECK_THROWS_AS(phase_integral(w, 1.0, kUnit, kCfg), numeric_error);
}

TEST_CASE("second derivative stencil") {
    auto sq = [](double e) { return e * e; };
    auto cube = [](double e) { return e * e * e; };
    CHECK(d2_wrt_eps(sq, 3.7, 0.05).value == doctest::Approx(2.0).epsilon(1e-12));
    const SecondDerivative d = d2_wrt_eps(cube, 1.0, 0.01);
    CHECK(d.value == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(d.coarse == doctest::Approx(6.0).epsilon(1e-8)); // exact for cubics
    CHECK(d.fine == doctest::Approx(6.0).epsilon(1e-8));
    CHECK_THROWS_AS(d2_wrt_eps(sq, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("eps stencil step and its feasibility") {
    const Well w = tanh12();
    CHECK(eps_stencil_step(w, 3.0, kCfg) == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(eps_stencil_step(w, 9.0, kCfg) == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(eps_stencil_step(harmonic(), 5.0, kCfg) == doctest::Approx(0.05).epsilon(1e-12));
    QuadratureConfig wide = kCfg;
    wide.eps_stencil_factor = 0.6;
    CHECK_THROWS_AS(eps_stencil_step(w, 6.0, wide), numeric_error);
}

} // TEST_SUITE
