#include "semiwell/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "semiwell/errors.hpp"

namespace semiwell {

namespace {

constexpr double kConvergeRel = 1e-11; // node-doubling convergence target
constexpr double kPi = std::numbers::pi;

void validate(const QuadratureConfig& cfg) {
    if (cfg.n_nodes < 32)
        throw std::invalid_argument("QuadratureConfig: n_nodes must be >= 32");
    if (!(cfg.eps_stencil_factor > 0.0) || !(cfg.tail_tol > 0.0) || !(cfg.root_tol > 0.0) ||
        cfg.refine_limit <= 0)
        throw std::invalid_argument("QuadratureConfig: all fields must be positive");
}

double root_tolerance(double eps, const QuadratureConfig& cfg) {
    return cfg.root_tol * std::max(1.0, std::abs(eps));
}

// bisect V(x) = eps on [inside, outside] (V(inside) < eps <= V(outside)),
// then polish with Newton steps using the analytic derivative
double refine_turning_point(const Well& well, double eps, double inside, double outside) {
    for (int it = 0; it < 90; ++it) {
        const double m = 0.5 * (inside + outside);
        if (m == inside || m == outside) break;
        (well.value(m) < eps ? inside : outside) = m;
    }
    double x = 0.5 * (inside + outside);
    for (int it = 0; it < 2; ++it) {
        const double d = well.derivative(x);
        if (d == 0.0) break;
        const double step = (well.value(x) - eps) / d;
        const double xn = x - step;
        if (xn > std::min(inside, outside) && xn < std::max(inside, outside)) x = xn;
    }
    return x;
}

// midpoint rule over theta in [0, pi] with node doubling; f must be the
// full integrand including the Jacobian
template <typename F>
double midpoint_doubling(F&& f, int n0, int refine_limit, const char* what) {
    double prev = std::numeric_limits<double>::quiet_NaN();
    int n = n0;
    for (int pass = 0; pass <= refine_limit; ++pass) {
        double sum = 0.0;
        const double dth = kPi / n;
        for (int j = 0; j < n; ++j) {
            const double th = (j + 0.5) * dth;
            sum += f(th);
        }
        const double cur = sum * dth;
        if (pass > 0) {
            const double diff = std::abs(cur - prev);
            if (diff <= kConvergeRel * std::max(std::abs(cur),
                                                std::numeric_limits<double>::min()))
                return cur;
        }
        prev = cur;
        n *= 2;
    }
    // one more estimate so the error can report the last two
    double sum = 0.0;
    const double dth = kPi / n;
    for (int j = 0; j < n; ++j) sum += f((j + 0.5) * dth);
    const double last = sum * dth;
    std::ostringstream os;
    os << what << " did not converge after the refine limit; last two estimates " << prev
       << " and " << last;
    throw numeric_error(os.str());
}

struct FinitePoints {
    double x_mid, x_half;
};

FinitePoints midpoint_halfwidth(const TurningPoints& tp) {
    return {0.5 * (tp.x_plus + tp.x_minus), 0.5 * (tp.x_plus - tp.x_minus)};
}

// Phi for eps at the asymptote: integral of sqrt(U - V) over the line,
// truncated where the integrand drops below tail_tol * peak
double improper_phase(const Well& well, const PhysicalScale& scale,
                      const QuadratureConfig& cfg) {
    const double U = *well.asymptote();
    auto g = [&](double x) { return std::sqrt(std::max(U - well.value(x), 0.0)); };
    const double peak = g(well.x_min());
    const double cut = cfg.tail_tol * peak;
    const double scale_x = std::max(1.0, std::abs(well.x_min()));
    const double x_cap = 1e9 * std::max(scale_x, well.domain_hint().value_or(1.0));

    auto find_cut = [&](int dir) {
        double x = well.x_min() + dir * std::max(1.0, well.domain_hint().value_or(1.0));
        while (g(x) >= cut) {
            x = well.x_min() + 2.0 * (x - well.x_min());
            if (std::abs(x) > x_cap)
                throw numeric_error("phase integral at the asymptote diverges: sqrt(U - V) "
                                    "tail decays too slowly to truncate");
        }
        return x;
    };
    const double xr = find_cut(+1);
    const double xl = find_cut(-1);

    auto integrate = [&](double a, double b) {
        // plain midpoint doubling on [a, b]
        double prev = std::numeric_limits<double>::quiet_NaN();
        int n = cfg.n_nodes;
        for (int pass = 0; pass <= cfg.refine_limit; ++pass) {
            const double dx = (b - a) / n;
            double sum = 0.0;
            for (int j = 0; j < n; ++j) sum += g(a + (j + 0.5) * dx);
            const double cur = sum * dx;
            if (pass > 0 && std::abs(cur - prev) <=
                                kConvergeRel * std::max(std::abs(cur),
                                                        std::numeric_limits<double>::min()))
                return cur;
            prev = cur;
            n *= 2;
        }
        throw numeric_error("improper phase integral did not converge after the refine limit");
    };
    const double base = integrate(xl, xr);
    // truncation-doubling check: widen the window once
    const double wide = integrate(well.x_min() + 2.0 * (xl - well.x_min()),
                                  well.x_min() + 2.0 * (xr - well.x_min()));
    if (std::abs(wide - base) > 1e-10 * std::max(std::abs(wide), 1e-300))
        throw numeric_error("phase integral at the asymptote diverges: value keeps growing "
                            "as the truncation window widens");
    return wide / (kPi * scale.beta);
}

} // namespace

TurningPoints turning_points(const Well& well, double eps, const QuadratureConfig& cfg) {
    validate(cfg);
    const double tol = root_tolerance(eps, cfg);
    if (eps <= well.v_min())
        throw numeric_error("turning_points: eps <= V_min, no classical region");
    if (well.asymptote()) {
        const double U = *well.asymptote();
        if (eps > U + tol)
            throw numeric_error("turning_points: eps above the asymptote, not a bound level");
        if (std::abs(eps - U) <= tol) {
            TurningPoints tp;
            tp.at_infinity_minus = tp.at_infinity_plus = true;
            tp.x_minus = -std::numeric_limits<double>::infinity();
            tp.x_plus = std::numeric_limits<double>::infinity();
            return tp;
        }
    }

    const double scale_x = std::max(1e-3, 1e-3 * well.domain_hint().value_or(1.0));
    auto bracket_out = [&](int dir) {
        double step = scale_x;
        double inner = well.x_min();
        for (int it = 0; it < 220; ++it) {
            const double x = well.x_min() + dir * step;
            if (well.value(x) >= eps) {
                const double t = refine_turning_point(well, eps, inner, x);
                if (std::abs(well.value(t) - eps) > tol)
                    throw numeric_error("turning_points: bisection did not reach the root "
                                        "tolerance");
                return t;
            }
            inner = x;
            step *= 2.0;
        }
        throw numeric_error("turning_points: no crossing found while expanding the bracket");
    };

    TurningPoints tp;
    tp.x_plus = bracket_out(+1);
    tp.x_minus = bracket_out(-1);
    return tp;
}

double phase_integral(const Well& well, double eps, const PhysicalScale& scale,
                      const QuadratureConfig& cfg) {
    validate(cfg);
    if (eps == well.v_min()) return 0.0; // empty classical region
    const TurningPoints tp = turning_points(well, eps, cfg);
    if (tp.at_infinity_minus || tp.at_infinity_plus)
        return improper_phase(well, scale, cfg);

    const auto [xm, xh] = midpoint_halfwidth(tp);
    auto f = [&](double th) {
        const double x = xm + xh * std::cos(th);
        const double d = eps - well.value(x);
        return d <= 0.0 ? 0.0 : std::sqrt(d) * xh * std::sin(th);
    };
    const double raw = midpoint_doubling(f, cfg.n_nodes, cfg.refine_limit, "phase integral");
    return raw / (kPi * scale.beta);
}

double singular_integral(const Well& well, double eps, const QuadratureConfig& cfg) {
    validate(cfg);
    if (well.asymptote() && !(eps < *well.asymptote()))
        throw numeric_error("singular_integral: eps must lie strictly below the asymptote");
    const TurningPoints tp = turning_points(well, eps, cfg);
    if (tp.at_infinity_minus || tp.at_infinity_plus)
        throw numeric_error("singular_integral: turning points must be finite");

    const auto [xm, xh] = midpoint_halfwidth(tp);
    const double d_plus = well.derivative(tp.x_plus);
    const double d_minus = well.derivative(tp.x_minus);
    const double d_scale = (eps - well.v_min()) / std::max(xh, 1e-300);
    if (std::abs(d_plus) < 1e-8 * d_scale || std::abs(d_minus) < 1e-8 * d_scale)
        throw numeric_error("singular_integral: degenerate turning point (dV/dx = 0 there), "
                            "the endpoint limit diverges");

    // endpoint limits of the transformed integrand: |V'(x_t)|^(3/2) sqrt(2 x_h)
    const double lim_plus = std::pow(std::abs(d_plus), 1.5) * std::sqrt(2.0 * xh);
    const double lim_minus = std::pow(std::abs(d_minus), 1.5) * std::sqrt(2.0 * xh);

    auto f = [&](double th) {
        const double x = xm + xh * std::cos(th);
        const double d = eps - well.value(x);
        if (d <= 0.0) return th < kPi / 2 ? lim_plus : lim_minus;
        const double dv = well.derivative(x);
        return dv * dv * xh * std::sin(th) / std::sqrt(d);
    };
    return midpoint_doubling(f, cfg.n_nodes, cfg.refine_limit, "singular integral");
}

SecondDerivative d2_wrt_eps(const std::function<double(double)>& f, double eps, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("d2_wrt_eps: h must be positive");
    auto five_point = [&](double step) {
        return (-f(eps - 2.0 * step) + 16.0 * f(eps - step) - 30.0 * f(eps) +
                16.0 * f(eps + step) - f(eps + 2.0 * step)) /
               (12.0 * step * step);
    };
    SecondDerivative out;
    out.coarse = five_point(h);
    out.fine = five_point(0.5 * h);
    out.value = (16.0 * out.fine - out.coarse) / 15.0;
    return out;
}

double eps_stencil_step(const Well& well, double eps, const QuadratureConfig& cfg) {
    validate(cfg);
    const double below = eps - well.v_min();
    if (!(below > 0.0))
        throw numeric_error("eps_stencil_step: eps must lie above the well bottom");
    double h;
    if (well.asymptote()) {
        const double above = *well.asymptote() - eps;
        if (!(above > 0.0))
            throw numeric_error("eps_stencil_step: eps must lie below the asymptote");
        h = cfg.eps_stencil_factor * std::min(below, above);
        if (eps + 2.0 * h >= *well.asymptote() || eps - 2.0 * h <= well.v_min())
            throw numeric_error("eps_stencil_step: stencil leaves the admissible interval");
    } else {
        h = cfg.eps_stencil_factor * eps;
        if (eps - 2.0 * h <= well.v_min())
            throw numeric_error("eps_stencil_step: stencil leaves the admissible interval");
    }
    return h;
}

} // namespace semiwell
