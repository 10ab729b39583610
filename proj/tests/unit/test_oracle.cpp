#include <cmath>

#include "doctest.h"
#include "semiwell/errors.hpp"
#include "semiwell/oracle.hpp"

using namespace semiwell;

namespace {
const PhysicalScale kUnit(1.0);
}

TEST_SUITE("oracle") {

TEST_CASE("harmonic eigenvalues") {
    const Well w = make_builtin("harmonic", {});
    const OracleSpectrum s = fd_spectrum(w, kUnit, 12.0, 4001, 4);
    REQUIRE(s.eigenvalues.size() == 4);
    for (int n = 0; n < 4; ++n) {
        const double exact = 2.0 * n + 1.0;
        CHECK(std::abs(s.eigenvalues[n] - exact) < 1e-5);
        // within its own Richardson estimate
        CHECK(std::abs(s.eigenvalues[n] - exact) <= s.error_estimate[n]);
    }
}

TEST_CASE("harmonic eigenvalues scale with beta") {
    const Well w = make_builtin("harmonic", {});
    const OracleSpectrum s = fd_spectrum(w, PhysicalScale(2.0), 12.0, 2001, 1);
    CHECK(std::abs(s.eigenvalues[0] - 2.0) < 1e-4);
}

TEST_CASE("tanh2 eigenvalues") {
    const Well w = make_builtin("tanh2", {{"U", 12.0}});
    const OracleSpectrum s = fd_spectrum(w, kUnit, 15.0, 4001, 3);
    REQUIRE(s.eigenvalues.size() == 3);
    const double expect[3] = {3.0, 8.0, 11.0};
    for (int n = 0; n < 3; ++n) {
        CHECK(std::abs(s.eigenvalues[n] - expect[n]) < 1e-4);
        CHECK(std::abs(s.eigenvalues[n] - expect[n]) <= s.error_estimate[n]);
    }
}

TEST_CASE("error estimates shrink about fourfold per grid doubling") {
    const Well w = make_builtin("harmonic", {});
    const OracleSpectrum a = fd_spectrum(w, kUnit, 12.0, 1001, 1);
    const OracleSpectrum b = fd_spectrum(w, kUnit, 12.0, 2001, 1);
    CHECK(a.error_estimate[0] / b.error_estimate[0] >= 3.5);
    CHECK(a.error_estimate[0] / b.error_estimate[0] <= 4.5);
}

TEST_CASE("boundary insensitivity at fixed spacing") {
    const Well w = make_builtin("tanh2", {{"U", 12.0}});
    FdOptions opts;
    opts.L = 15.0;
    opts.N = 2001;
    opts.m = 3;
    opts.auto_scale_L = false;
    opts.check_boundary = false;
    const OracleSpectrum a = fd_spectrum(w, kUnit, opts);
    opts.L = 22.5;
    opts.N = 3001;
    const OracleSpectrum b = fd_spectrum(w, kUnit, opts);
    for (int n = 0; n < 3; ++n)
        CHECK(std::abs(a.eigenvalues[n] - b.eigenvalues[n]) <
              1e-8 * std::max(1.0, std::abs(a.eigenvalues[n])));
}

TEST_CASE("a box that cuts the well off is rejected") {
    const Well w = make_builtin("tanh2", {{"U", 12.0}});
    CHECK_THROWS_AS(fd_spectrum(w, kUnit, 6.0, 2001, 2), numeric_error);
}

TEST_CASE("requesting more levels than the well holds") {
    const Well w = make_builtin("tanh2", {{"U", 12.0}});
    CHECK_THROWS_AS(fd_spectrum(w, kUnit, 15.0, 2001, 5), numeric_error);
    FdOptions opts;
    opts.L = 15.0;
    opts.N = 2001;
    opts.m = 5;
    opts.allow_fewer = true;
    CHECK(fd_spectrum(w, kUnit, opts).eigenvalues.size() == 3);
}

TEST_CASE("grid validation") {
    const Well w = make_builtin("harmonic", {});
    CHECK_THROWS_AS(fd_spectrum(w, kUnit, 12.0, 500, 1), std::invalid_argument);
    CHECK_THROWS_AS(fd_spectrum(w, kUnit, 12.0, 1000, 1), std::invalid_argument);
    CHECK_THROWS_AS(fd_spectrum(w, kUnit, -3.0, 1001, 1), std::invalid_argument);
}

TEST_CASE("a very shallow well still holds its ground state") {
    const Well w = make_builtin("gauss", {{"U", 0.01}, {"w", 1.0}});
    FdOptions opts;
    opts.N = 2001;
    opts.m = 2;
    opts.allow_fewer = true;
    const OracleSpectrum s = fd_spectrum(w, kUnit, opts);
    REQUIRE(s.eigenvalues.size() == 1); // exactly one bound state
    CHECK(s.eigenvalues[0] > 0.0);
    CHECK(s.eigenvalues[0] < 0.01);
    CHECK(s.L > 100.0); // the box was auto-scaled to cover the long tail
}

TEST_CASE("analytic spectra") {
    CHECK(analytic_spectrum("harmonic", {}, kUnit, 0) == 1.0);
    CHECK(analytic_spectrum("harmonic", {}, PhysicalScale(2.0), 1) == 6.0);
    CHECK(analytic_spectrum("tanh2", {{"U", 12.0}}, kUnit, 0) == doctest::Approx(3.0));
    CHECK(analytic_spectrum("tanh2", {{"U", 12.0}}, kUnit, 1) == doctest::Approx(8.0));
    CHECK(analytic_spectrum("tanh2", {{"U", 12.0}}, kUnit, 2) == doctest::Approx(11.0));
    CHECK_THROWS_AS(analytic_spectrum("tanh2", {{"U", 12.0}}, kUnit, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(analytic_spectrum("gauss", {{"U", 1.0}}, kUnit, 0),
                    std::invalid_argument);
}

TEST_CASE("analytic and fd spectra agree within the fd estimates") {
    const Well w = make_builtin("tanh2", {{"U", 12.0}});
    const OracleSpectrum s = fd_spectrum(w, kUnit, 15.0, 4001, 3);
    for (int n = 0; n < 3; ++n)
        CHECK(std::abs(s.eigenvalues[n] - analytic_spectrum("tanh2", {{"U", 12.0}}, kUnit, n)) <=
              s.error_estimate[n]);
}

} // TEST_SUITE
