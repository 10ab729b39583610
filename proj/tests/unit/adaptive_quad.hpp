#pragma once

// Test-only reference integrator, deliberately independent of the
// midpoint/cos-theta path in the library: adaptive Simpson with explicit
// endpoint splitting and a u^2 substitution absorbing the inverse
// square-root singularity.

#include <cmath>
#include <functional>
#include <stdexcept>

#include "semiwell/potential.hpp"

namespace refquad {

inline double simpson(const std::function<double(double)>& f, double a, double m, double b,
                      double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double tol,
                            int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, lm, m, fa, flm, fm);
    const double right = simpson(f, m, rm, b, fm, frm, fb);
    if (depth <= 0) return left + right;
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adaptive_step(f, a, b, fa, fm, fb, simpson(f, a, m, b, fa, fm, fb), tol, 48);
}

// independent turning points: plain bisection of V - eps from the minimum outward
inline double turning_point(const semiwell::Well& w, double eps, int dir) {
    double step = 1e-3;
    double inner = w.x_min();
    double outer = inner;
    for (int i = 0; i < 200; ++i) {
        outer = w.x_min() + dir * step;
        if (w.value(outer) >= eps) break;
        inner = outer;
        step *= 2.0;
    }
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (inner + outer);
        if (m == inner || m == outer) break;
        (w.value(m) < eps ? inner : outer) = m;
    }
    return 0.5 * (inner + outer);
}

// integral of g(x) with an integrable 1/sqrt endpoint at x_minus and
// x_plus, computed as three pieces with u^2 substitutions at the ends
inline double endpoint_split_integral(const std::function<double(double)>& g, double x_minus,
                                      double x_plus, double tol) {
    const double width = x_plus - x_minus;
    const double a = 0.25 * width;
    auto left = [&](double u) { return g(x_minus + u * u) * 2.0 * u; };
    auto right = [&](double u) { return g(x_plus - u * u) * 2.0 * u; };
    return adaptive_simpson(left, 0.0, std::sqrt(a), tol) +
           adaptive_simpson(g, x_minus + a, x_plus - a, tol) +
           adaptive_simpson(right, 0.0, std::sqrt(a), tol);
}

// reference I(eps) = int (V')^2 / sqrt(eps - V)
inline double singular_reference(const semiwell::Well& w, double eps, double tol = 1e-12) {
    const double xm = turning_point(w, eps, -1);
    const double xp = turning_point(w, eps, +1);
    auto g = [&](double x) {
        const double d = eps - w.value(x);
        if (d <= 0.0) return 0.0;
        const double dv = w.derivative(x);
        return dv * dv / std::sqrt(d);
    };
    return endpoint_split_integral(g, xm, xp, tol);
}

// reference Phi(eps)
inline double phase_reference(const semiwell::Well& w, double eps, double beta,
                              double tol = 1e-13) {
    const double xm = turning_point(w, eps, -1);
    const double xp = turning_point(w, eps, +1);
    auto g = [&](double x) { return std::sqrt(std::max(eps - w.value(x), 0.0)); };
    return endpoint_split_integral(g, xm, xp, tol) / (3.14159265358979323846 * beta);
}

// reference delta1: five-point second difference on singular_reference,
// one Richardson step, mirroring the definition but on the independent
// integrator
inline double delta1_reference(const semiwell::Well& w, double eps, double beta, double h) {
    auto I = [&](double e) { return singular_reference(w, e, 1e-13); };
    auto d2 = [&](double step) {
        return (-I(eps - 2.0 * step) + 16.0 * I(eps - step) - 30.0 * I(eps) +
                16.0 * I(eps + step) - I(eps + 2.0 * step)) /
               (12.0 * step * step);
    };
    const double coarse = d2(h), fine = d2(0.5 * h);
    return beta / (24.0 * 3.14159265358979323846) * (16.0 * fine - coarse) / 15.0;
}

} // namespace refquad
