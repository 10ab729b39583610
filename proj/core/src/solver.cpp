#include "semiwell/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "semiwell/errors.hpp"

namespace semiwell {

namespace {

// Per-well scheme state: Phi(U) and q are evaluated once, at the
// reference energy (V_min + U)/2, not per level.
struct DeltaModel {
    const Well* well = nullptr;
    Scheme scheme = Scheme::Plain;
    PhysicalScale scale;
    QuadratureConfig cfg;
    std::optional<double> phi_at_U;
    std::optional<double> q;
    std::optional<double> surrogate; // -1/(8 Phi(U)) for the simplified scheme

    double eval(double eps) const {
        DeltaInputs in;
        in.phi_at_U = phi_at_U;
        in.q = q;
        switch (scheme) {
            case Scheme::Plain:
                return 0.0;
            case Scheme::ImprovedSimplified:
                in.delta1 = *surrogate;
                break;
            default:
                in.delta1 = delta1_numeric(*well, eps, scale, cfg);
                break;
        }
        return apply_scheme(scheme, in);
    }
};

DeltaModel prepare_model(const Well& well, Scheme scheme, const PhysicalScale& scale,
                         const QuadratureConfig& cfg) {
    DeltaModel m;
    m.well = &well;
    m.scheme = scheme;
    m.scale = scale;
    m.cfg = cfg;
    if (scheme == Scheme::Improved || scheme == Scheme::ImprovedSimplified) {
        if (!well.asymptote())
            throw scheme_error("well '" + well.name() +
                               "' has no asymptote; the improved quantization schemes are "
                               "inapplicable");
        m.phi_at_U = phase_integral(well, *well.asymptote(), scale, cfg);
        if (scheme == Scheme::Improved) {
            const double eps_ref = 0.5 * (well.v_min() + *well.asymptote());
            m.q = compute_q(delta1_numeric(well, eps_ref, scale, cfg), *m.phi_at_U);
        } else {
            m.surrogate = simplified_delta1(*m.phi_at_U);
        }
    }
    return m;
}

struct RootResult {
    double eps;
    double bracket;
    double delta;
};

// Phi(eps) - delta(eps) - (n + 1/2) = 0 on (lo, hi). Coarse bisection
// reuses delta frozen at the initial bracket midpoint; once the interval
// shrinks below coarse_width the shift is re-evaluated at every probe.
// The final refinement is a bracket-safeguarded secant iteration.
RootResult solve_quantization(const Well& well, const DeltaModel& model, int n,
                              const PhysicalScale& scale, const QuadratureConfig& cfg,
                              const SolverConfig& solver, double lo, double hi,
                              double span) {
    const double target = n + 0.5;
    const double delta_frozen = model.eval(0.5 * (lo + hi));
    auto phi = [&](double e) { return phase_integral(well, e, scale, cfg); };

    double f_lo = phi(lo) - delta_frozen - target;
    double f_hi = phi(hi) - delta_frozen - target;
    if (f_lo >= 0.0 || f_hi <= 0.0) {
        std::ostringstream os;
        os << "level n=" << n << ": no sign change in the root bracket (F="
           << f_lo << " .. " << f_hi << ")";
        throw no_bound_level(os.str());
    }

    const double coarse_width = 1e-3 * span;
    while (hi - lo > coarse_width) {
        const double m = 0.5 * (lo + hi);
        const double fm = phi(m) - delta_frozen - target;
        if (fm < 0.0) { lo = m; f_lo = fm; } else { hi = m; f_hi = fm; }
    }

    auto F = [&](double e) { return phi(e) - model.eval(e) - target; };
    f_lo = F(lo);
    f_hi = F(hi);
    if (f_lo >= 0.0 || f_hi <= 0.0) {
        // the frozen shift parked the coarse bracket beside the true root;
        // widen it again within the admissible interval
        double grow = 8.0 * (hi - lo);
        const double lo_cap = well.v_min() + 1e-12 * span;
        double hi_cap = well.asymptote() ? *well.asymptote() - 1e-12 * span : hi + 1e3 * grow;
        for (int it = 0; it < 50 && f_lo >= 0.0 && lo > lo_cap; ++it) {
            lo = std::max(lo - grow, lo_cap);
            f_lo = F(lo);
            grow *= 2.0;
        }
        grow = 8.0 * (hi - lo);
        for (int it = 0; it < 50 && f_hi <= 0.0 && hi < hi_cap; ++it) {
            hi = std::min(hi + grow, hi_cap);
            f_hi = F(hi);
            grow *= 2.0;
        }
        if (f_lo >= 0.0 || f_hi <= 0.0)
            throw no_bound_level("level lost after re-evaluating the shift at fine probes");
    }

    // safeguarded secant on the bracket
    double a = lo, fa = f_lo, b = hi, fb = f_hi;
    double x_prev = a, f_prev = fa, x_cur = b, f_cur = fb;
    const double x_tol = solver.eps_rel_tol * std::max(std::abs(b), 1e-6 * span);
    for (int it = 0; it < 120 && b - a > x_tol; ++it) {
        double x_next;
        if (f_cur != f_prev) {
            x_next = x_cur - f_cur * (x_cur - x_prev) / (f_cur - f_prev);
        } else {
            x_next = 0.5 * (a + b);
        }
        if (!(x_next > a && x_next < b)) x_next = 0.5 * (a + b);
        const double f_next = F(x_next);
        if (f_next == 0.0) { a = b = x_next; fa = fb = f_next; break; }
        if (f_next < 0.0) { a = x_next; fa = f_next; } else { b = x_next; fb = f_next; }
        x_prev = x_cur; f_prev = f_cur;
        x_cur = x_next; f_cur = f_next;
    }
    RootResult out;
    out.eps = std::abs(fa) <= std::abs(fb) ? a : b;
    out.bracket = b - a;
    out.delta = model.eval(out.eps);
    return out;
}

double gamma_impl(const Well& well, const DeltaModel& model, double eps,
                  const PhysicalScale& scale, const QuadratureConfig& cfg) {
    if (model.scheme == Scheme::Plain) return 0.0;
    const double h = eps_stencil_step(well, eps, cfg);
    const double d_delta = (model.eval(eps + h) - model.eval(eps - h)) / (2.0 * h);
    const double d_phi = (phase_integral(well, eps + h, scale, cfg) -
                          phase_integral(well, eps - h, scale, cfg)) /
                         (2.0 * h);
    return d_delta / (d_phi - d_delta);
}

LevelRecord solve_with_model(const Well& well, const DeltaModel& model, int n,
                             const PhysicalScale& scale, const QuadratureConfig& cfg,
                             const SolverConfig& solver) {
    if (n < 0) throw std::invalid_argument("solve_level: n must be >= 0");

    double span, lo, hi;
    if (well.asymptote()) {
        const double U = *well.asymptote();
        span = U - well.v_min();
        const double h0 = solver.bottom_offset * span;
        lo = well.v_min() + h0;
        hi = U - h0;
    } else {
        span = std::max(1.0, std::abs(well.v_min()));
        const double h0 = solver.bottom_offset * span;
        lo = well.v_min() + h0;
        // expanding upper bracket for confining wells, with the scheme's
        // own shift evaluated at each candidate
        hi = well.v_min() + span;
        const double target = n + 0.5;
        bool found = false;
        for (int it = 0; it < 200; ++it) {
            const double f = phase_integral(well, hi, scale, cfg) - model.eval(hi) - target;
            if (f > 0.0) { found = true; break; }
            hi = well.v_min() + 2.0 * (hi - well.v_min());
        }
        if (!found)
            throw numeric_error("solve_level: could not bracket the level in a confining well");
        span = hi - well.v_min();
    }

    const RootResult root = solve_quantization(well, model, n, scale, cfg, solver, lo, hi, span);

    LevelRecord rec;
    rec.n = n;
    rec.eps = root.eps;
    rec.delta = root.delta;
    rec.bracket = root.bracket;
    rec.residual = std::abs(phase_integral(well, root.eps, scale, cfg) - root.delta -
                            (n + 0.5));
    if (rec.residual > solver.residual_tol) {
        std::ostringstream os;
        os << "level n=" << n << ": residual " << rec.residual
           << " exceeds the solver tolerance";
        throw numeric_error(os.str());
    }
    try {
        rec.delta1 = delta1_numeric(well, root.eps, scale, cfg);
    } catch (const numeric_error&) {
        rec.delta1 = std::numeric_limits<double>::quiet_NaN();
    }
    if (model.scheme == Scheme::Improved) {
        rec.q = solver.per_level_q && std::isfinite(rec.delta1)
                    ? compute_q(rec.delta1, *model.phi_at_U)
                    : *model.q;
        rec.mu = 1.0 - *rec.q;
    } else if (model.scheme == Scheme::ImprovedSimplified) {
        rec.q = 1.0;
        rec.mu = 0.0;
    }
    try {
        rec.gamma = gamma_impl(well, model, root.eps, scale, cfg);
    } catch (const numeric_error&) {
        rec.gamma = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
}

} // namespace

LevelRecord solve_level(const Well& well, Scheme scheme, int n, const PhysicalScale& scale,
                        const QuadratureConfig& cfg, const SolverConfig& solver) {
    const DeltaModel model = prepare_model(well, scheme, scale, cfg);
    return solve_with_model(well, model, n, scale, cfg, solver);
}

SpectrumReport spectrum(const Well& well, Scheme scheme, int n_max, const PhysicalScale& scale,
                        const QuadratureConfig& cfg, const SolverConfig& solver) {
    if (n_max < 0) throw std::invalid_argument("spectrum: n_max must be >= 0");
    const DeltaModel model = prepare_model(well, scheme, scale, cfg);

    SpectrumReport report;
    report.well_name = well.name();
    report.well_params = well.params();
    report.scheme = scheme;
    report.beta = scale.beta;
    report.termination = Termination::MaxLevelReached;
    for (int n = 0; n <= n_max; ++n) {
        try {
            report.levels.push_back(solve_with_model(well, model, n, scale, cfg, solver));
        } catch (const no_bound_level&) {
            report.termination = Termination::NoRootBelowAsymptote;
            break;
        }
        if (report.levels.size() > 1 &&
            !(report.levels.back().eps > report.levels[report.levels.size() - 2].eps))
            throw numeric_error("spectrum: levels are not strictly increasing");
    }
    return report;
}

double gamma(const Well& well, Scheme scheme, const LevelRecord& record,
             const PhysicalScale& scale, const QuadratureConfig& cfg) {
    DeltaModel model;
    model.well = &well;
    model.scheme = scheme;
    model.scale = scale;
    model.cfg = cfg;
    if (scheme == Scheme::Improved || scheme == Scheme::ImprovedSimplified) {
        if (!well.asymptote())
            throw scheme_error("well has no asymptote; the improved quantization schemes are "
                               "inapplicable");
        model.phi_at_U = phase_integral(well, *well.asymptote(), scale, cfg);
        if (scheme == Scheme::Improved)
            model.q = record.q ? record.q
                               : std::optional<double>(compute_q(
                                     delta1_numeric(well,
                                                    0.5 * (well.v_min() + *well.asymptote()),
                                                    scale, cfg),
                                     *model.phi_at_U));
        else
            model.surrogate = simplified_delta1(*model.phi_at_U);
    }
    return gamma_impl(well, model, record.eps, scale, cfg);
}

} // namespace semiwell
