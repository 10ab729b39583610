#pragma once

#include <functional>

#include "semiwell/potential.hpp"

namespace semiwell {

struct QuadratureConfig {
    int n_nodes = 64;                ///< initial node count (>= 32)
    double eps_stencil_factor = 1e-2;///< kappa: relative step for energy derivatives
    double tail_tol = 1e-14;         ///< improper-integral truncation level
    double root_tol = 1e-12;         ///< turning-point tolerance scale: tol = root_tol * max(1, |eps|)
    int refine_limit = 12;           ///< max node/truncation doublings
};

/// Positions with V(x) = eps bounding the classical region. When eps
/// equals the asymptote (within root tolerance) the region is unbounded
/// and the at_infinity flags are set instead of finite positions.
struct TurningPoints {
    double x_minus = 0.0;
    double x_plus = 0.0;
    bool at_infinity_minus = false;
    bool at_infinity_plus = false;
};

TurningPoints turning_points(const Well& well, double eps, const QuadratureConfig& cfg);

/// Phi(eps) = (1/(pi beta)) * integral of sqrt(eps - V) between turning
/// points. Finite turning points use the substitution
/// x = x_m + x_h cos(theta), which turns the integrand into an analytic
/// periodic function of theta (simple turning points), integrated by a
/// midpoint rule with node doubling to relative 1e-11. At eps equal to
/// the asymptote the integral runs over the whole line, truncated where
/// the integrand falls below tail_tol times its peak, with one
/// truncation-doubling check.
double phase_integral(const Well& well, double eps, const PhysicalScale& scale,
                      const QuadratureConfig& cfg);

/// I(eps) = integral of (dV/dx)^2 / sqrt(eps - V) between turning points.
/// Same cos(theta) substitution: the sin(theta) Jacobian cancels the
/// endpoint singularity; at the endpoints the integrand is extended by
/// its finite limit |V'(x_t)|^(3/2) sqrt(2 x_h) computed from the
/// derivative at the turning points. Degenerate turning points
/// (V'(x_t) = 0) are a hard error.
double singular_integral(const Well& well, double eps, const QuadratureConfig& cfg);

/// Five-point central second difference at step h with one Richardson
/// step (h and h/2). `value` is the extrapolated result; `coarse` and
/// `fine` are the raw h and h/2 estimates for error reporting.
struct SecondDerivative {
    double value = 0.0;
    double coarse = 0.0;
    double fine = 0.0;
};

SecondDerivative d2_wrt_eps(const std::function<double(double)>& f, double eps, double h);

/// Stencil step for energy derivatives at eps:
/// kappa * min(eps - V_min, U - eps) for asymptotic wells, kappa * eps
/// for confining wells. Throws numeric_error if the +-2h stencil leaves
/// the admissible energy interval.
double eps_stencil_step(const Well& well, double eps, const QuadratureConfig& cfg);

} // namespace semiwell
