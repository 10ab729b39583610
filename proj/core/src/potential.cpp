#include "semiwell/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "semiwell/errors.hpp"

namespace semiwell {

namespace {

// fraction of U defining the domain hint: smallest X with U - V(X) < kTailFraction * U
constexpr double kTailFraction = 1e-12;
// accepted h-vs-h/2 disagreement in V for the auxiliary-function ODE
constexpr double kOdeTol = 2.5e-11;
constexpr double kEscapeLimit = 1e120;

double require_positive(const std::map<std::string, double>& params, const std::string& key,
                        const std::string& well) {
    auto it = params.find(key);
    if (it == params.end())
        throw std::invalid_argument("well '" + well + "' requires parameter '" + key + "'");
    if (!(it->second > 0.0))
        throw std::invalid_argument("well '" + well + "': parameter '" + key +
                                    "' must be positive");
    return it->second;
}

void reject_unknown(const std::map<std::string, double>& params,
                    std::initializer_list<const char*> known, const std::string& well) {
    for (const auto& [k, v] : params) {
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* n) { return k == n; }) == known.end())
            throw std::invalid_argument("well '" + well + "': unknown parameter '" + k + "'");
    }
}

// ---------------------------------------------------------------------------
// auxiliary-function ODE: s' = sigma(s) = a2 s^2 + a1 s + a0
// ---------------------------------------------------------------------------

struct ShapeFuncs {
    ShapeClassSpec spec;
    double sigma(double s) const { return (spec.a2 * s + spec.a1) * s + spec.a0; }
    double dsigma(double s) const { return 2.0 * spec.a2 * s + spec.a1; }
    double v_of_s(double s) const { return (spec.A * spec.A * s + spec.B) * s + spec.C; }
    double dv_dx(double s) const { return (2.0 * spec.A * spec.A * s + spec.B) * sigma(s); }
};

// one classical RK4 step of the autonomous ODE
double rk4_step(const ShapeFuncs& f, double s, double h) {
    const double k1 = f.sigma(s);
    const double k2 = f.sigma(s + 0.5 * h * k1);
    const double k3 = f.sigma(s + 0.5 * h * k2);
    const double k4 = f.sigma(s + h * k3);
    return s + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// s sampled on a uniform grid x_i = dir * i * h, i = 0..n_steps,
// with n_steps * h = half_range exactly
struct OdeBranch {
    double h = 0.0;
    int dir = 1;
    std::vector<double> s;
    double x_end() const { return dir * h * static_cast<double>(s.size() - 1); }
};

OdeBranch integrate_branch(const ShapeFuncs& f, double s0, double half_range,
                           std::size_t n_steps, int dir) {
    OdeBranch b;
    b.h = half_range / static_cast<double>(n_steps);
    b.dir = dir;
    b.s.reserve(n_steps + 1);
    b.s.push_back(s0);
    double s = s0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        s = rk4_step(f, s, dir * b.h);
        if (!std::isfinite(s) || std::abs(s) > kEscapeLimit) {
            std::ostringstream os;
            os << "shape-class ODE solution escapes to infinity near x = "
               << dir * static_cast<double>(i + 1) * b.h
               << "; the potential is not a well on the requested range";
            throw numeric_error(os.str());
        }
        b.s.push_back(s);
    }
    return b;
}

// quintic Hermite using s' = sigma(s), s'' = sigma'(s) sigma(s) at the cell ends
double hermite_eval(const ShapeFuncs& f, const OdeBranch& b, double ax) {
    const double pos = ax / b.h;
    auto i = static_cast<std::size_t>(pos);
    if (i >= b.s.size() - 1) i = b.s.size() - 2;
    const double t = pos - static_cast<double>(i);
    const double h = b.dir * b.h;
    const double f0 = b.s[i], f1 = b.s[i + 1];
    const double d0 = f.sigma(f0), d1 = f.sigma(f1);
    const double c0 = f.dsigma(f0) * d0, c1 = f.dsigma(f1) * d1;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    const double h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    const double h20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    const double h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    const double h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    const double h21 = 0.5 * t3 - t4 + 0.5 * t5;
    return f0 * h00 + h * d0 * h10 + h * h * c0 * h20 +
           f1 * h01 + h * d1 * h11 + h * h * c1 * h21;
}

struct OdeSolution {
    ShapeFuncs funcs;
    OdeBranch right, left;          // x >= 0 and x <= 0
    bool has_tail = false;          // both ends settle onto sigma roots
    double root_right = 0.0, root_left = 0.0;
    double lam_right = 0.0, lam_left = 0.0; // sigma'(root)

    double s_at(double x) const {
        const OdeBranch& b = x >= 0.0 ? right : left;
        const double ax = std::abs(x);
        const double xe = std::abs(b.x_end());
        if (ax <= xe) return hermite_eval(funcs, b, ax);
        if (!has_tail)
            throw numeric_error("shape-class well evaluated outside the integrated range "
                                "(increase half_range)");
        // linearized approach to the sigma root beyond the integrated range
        if (x > 0.0) {
            const double edge = b.s.back();
            return root_right + (edge - root_right) * std::exp(lam_right * (x - xe));
        }
        const double edge = b.s.back();
        return root_left + (edge - root_left) * std::exp(-lam_left * (x + xe));
    }
};

std::vector<double> sigma_roots(const ShapeClassSpec& sp) {
    std::vector<double> roots;
    if (sp.a2 != 0.0) {
        const double disc = sp.a1 * sp.a1 - 4.0 * sp.a2 * sp.a0;
        if (disc >= 0.0) {
            const double r = std::sqrt(disc);
            roots.push_back((-sp.a1 - r) / (2.0 * sp.a2));
            roots.push_back((-sp.a1 + r) / (2.0 * sp.a2));
        }
    } else if (sp.a1 != 0.0) {
        roots.push_back(-sp.a0 / sp.a1);
    }
    return roots;
}

} // namespace

PhysicalScale::PhysicalScale(double b) : beta(b) {
    if (!(b > 0.0) || !std::isfinite(b))
        throw std::invalid_argument("PhysicalScale: beta must be positive and finite");
}

Well::Well(std::string name, std::vector<std::pair<std::string, double>> params,
           std::function<double(double)> value, std::function<double(double)> derivative,
           double x_min, double v_min, std::optional<double> asymptote,
           std::optional<double> domain_hint)
    : name_(std::move(name)),
      params_(std::move(params)),
      value_(std::move(value)),
      derivative_(std::move(derivative)),
      x_min_(x_min),
      v_min_(v_min),
      asymptote_(asymptote),
      domain_hint_(domain_hint) {
    if (!value_ || !derivative_)
        throw std::invalid_argument("Well: value and derivative must be callable");
    if (asymptote_ && !(*asymptote_ > v_min_))
        throw std::invalid_argument("Well: asymptote must lie above the minimum");
}

Well make_builtin(const std::string& name, const std::map<std::string, double>& params) {
    if (name == "harmonic") {
        reject_unknown(params, {}, name);
        return Well(name, {},
                    [](double x) { return x * x; },
                    [](double x) { return 2.0 * x; },
                    0.0, 0.0, std::nullopt, std::nullopt);
    }
    if (name == "quartic") {
        reject_unknown(params, {}, name);
        return Well(name, {},
                    [](double x) { return x * x * x * x; },
                    [](double x) { return 4.0 * x * x * x; },
                    0.0, 0.0, std::nullopt, std::nullopt);
    }
    if (name == "tanh2") {
        reject_unknown(params, {"U"}, name);
        const double U = require_positive(params, "U", name);
        // U - V = U sech^2 x: hint where sech^2 X = kTailFraction
        const double hint = std::acosh(1.0 / std::sqrt(kTailFraction));
        return Well(name, {{"U", U}},
                    [U](double x) { const double t = std::tanh(x); return U * t * t; },
                    [U](double x) {
                        const double t = std::tanh(x), c = std::cosh(x);
                        return 2.0 * U * t / (c * c);
                    },
                    0.0, 0.0, U, hint);
    }
    if (name == "gauss") {
        reject_unknown(params, {"U", "w"}, name);
        const double U = require_positive(params, "U", name);
        double w = 1.0;
        if (params.count("w")) w = require_positive(params, "w", name);
        const double hint = w * std::sqrt(-std::log(kTailFraction));
        return Well(name, {{"U", U}, {"w", w}},
                    [U, w](double x) { return U * (1.0 - std::exp(-(x * x) / (w * w))); },
                    [U, w](double x) {
                        return U * 2.0 * x / (w * w) * std::exp(-(x * x) / (w * w));
                    },
                    0.0, 0.0, U, hint);
    }
    throw std::invalid_argument("unknown well '" + name + "'");
}

Well from_shape_class(const ShapeClassSpec& spec, const PhysicalScale& scale,
                      double half_range) {
    (void)scale; // the auxiliary function and V(x) do not involve beta
    if (!(half_range > 0.0))
        throw std::invalid_argument("from_shape_class: half_range must be positive");

    ShapeFuncs funcs{spec};
    auto sol = std::make_shared<OdeSolution>();
    sol->funcs = funcs;

    // halve the step until doubling it moves V by < kOdeTol relative,
    // comparing the h and h/2 grids at their shared nodes
    auto n_steps = static_cast<std::size_t>(std::ceil(half_range * 256.0));
    bool converged = false;
    for (int attempt = 0; attempt < 9; ++attempt) {
        OdeBranch r1 = integrate_branch(funcs, spec.s0, half_range, n_steps, +1);
        OdeBranch r2 = integrate_branch(funcs, spec.s0, half_range, 2 * n_steps, +1);
        OdeBranch l1 = integrate_branch(funcs, spec.s0, half_range, n_steps, -1);
        OdeBranch l2 = integrate_branch(funcs, spec.s0, half_range, 2 * n_steps, -1);
        double worst = 0.0;
        for (std::size_t i = 0; i < r1.s.size(); ++i) {
            const double va = funcs.v_of_s(r1.s[i]), vb = funcs.v_of_s(r2.s[2 * i]);
            worst = std::max(worst, std::abs(va - vb) / std::max(1.0, std::abs(vb)));
        }
        for (std::size_t i = 0; i < l1.s.size(); ++i) {
            const double va = funcs.v_of_s(l1.s[i]), vb = funcs.v_of_s(l2.s[2 * i]);
            worst = std::max(worst, std::abs(va - vb) / std::max(1.0, std::abs(vb)));
        }
        if (worst < kOdeTol) {
            sol->right = std::move(r2);
            sol->left = std::move(l2);
            converged = true;
            break;
        }
        n_steps *= 2;
    }
    if (!converged)
        throw numeric_error("shape-class ODE integration did not reach the requested accuracy");

    // does each side settle onto a root of sigma?
    const auto roots = sigma_roots(spec);
    auto nearest_root = [&roots](double s) -> std::optional<double> {
        std::optional<double> best;
        for (double r : roots) {
            const double d = std::abs(s - r);
            if (d <= 1e-5 * (1.0 + std::abs(r)) && (!best || d < std::abs(s - *best))) best = r;
        }
        return best;
    };
    const auto root_r = nearest_root(sol->right.s.back());
    const auto root_l = nearest_root(sol->left.s.back());

    std::optional<double> asymptote;
    std::optional<double> hint;
    if (root_r && root_l) {
        sol->has_tail = true;
        sol->root_right = *root_r;
        sol->root_left = *root_l;
        sol->lam_right = funcs.dsigma(*root_r);
        sol->lam_left = funcs.dsigma(*root_l);
        const double u_r = funcs.v_of_s(*root_r);
        const double u_l = funcs.v_of_s(*root_l);
        const double uscale = std::max({1.0, std::abs(u_r), std::abs(u_l)});
        if (std::abs(u_r - u_l) <= 1e-9 * uscale) {
            const double U = u_r;
            // domain hint: smallest grid X with U - V(+-X) below the tail fraction
            const double tol = kTailFraction * std::max(std::abs(U), 1.0);
            double X = half_range;
            for (double x = half_range; x >= 0.0; x -= sol->right.h * 4.0) {
                if (std::abs(U - funcs.v_of_s(sol->s_at(x))) >= tol ||
                    std::abs(U - funcs.v_of_s(sol->s_at(-x))) >= tol)
                    break;
                X = x;
            }
            // declaration rule: symmetric limits at X and no drift out to 2X
            const double vX = funcs.v_of_s(sol->s_at(X));
            const double vmX = funcs.v_of_s(sol->s_at(-X));
            const double v2X = funcs.v_of_s(sol->s_at(2.0 * X));
            const double ref = std::max(std::abs(vX), 1e-12 * uscale);
            if (std::abs(vX - vmX) < 1e-9 * ref && std::abs(v2X - vX) < 1e-9 * ref) {
                asymptote = U;
                hint = X;
            } else {
                sol->has_tail = false;
            }
        } else {
            sol->has_tail = false; // sides approach different energies: no common asymptote
        }
    }

    // locate the well bottom: global grid minimum, refined by a derivative
    // sign change (dV/dx = (2 A^2 s + B) sigma(s))
    double best_x = 0.0, best_v = funcs.v_of_s(spec.s0);
    std::size_t best_side = 2, best_idx = 0; // 0 = right, 1 = left
    for (std::size_t i = 0; i < sol->right.s.size(); ++i) {
        const double v = funcs.v_of_s(sol->right.s[i]);
        if (v < best_v) { best_v = v; best_x = i * sol->right.h; best_side = 0; best_idx = i; }
    }
    for (std::size_t i = 0; i < sol->left.s.size(); ++i) {
        const double v = funcs.v_of_s(sol->left.s[i]);
        if (v < best_v) { best_v = v; best_x = -static_cast<double>(i) * sol->left.h; best_side = 1; best_idx = i; }
    }
    const std::size_t edge_r = sol->right.s.size() - 1, edge_l = sol->left.s.size() - 1;
    if ((best_side == 0 && best_idx == edge_r) || (best_side == 1 && best_idx == edge_l))
        throw numeric_error("shape-class potential has no interior minimum on the integrated "
                            "range; not a well");
    double x_min = best_x, v_min = best_v;
    {
        const double step = sol->right.h;
        double a = best_x - step, b = best_x + step;
        auto dv = [&](double x) { return funcs.dv_dx(sol->s_at(x)); };
        if (dv(a) < 0.0 && dv(b) > 0.0) {
            for (int it = 0; it < 80; ++it) {
                const double m = 0.5 * (a + b);
                (dv(m) < 0.0 ? a : b) = m;
            }
            x_min = 0.5 * (a + b);
            v_min = funcs.v_of_s(sol->s_at(x_min));
        }
    }

    std::vector<std::pair<std::string, double>> params = {
        {"A", spec.A}, {"B", spec.B}, {"C", spec.C},
        {"a0", spec.a0}, {"a1", spec.a1}, {"a2", spec.a2}, {"s0", spec.s0}};
    auto value = [sol](double x) { return sol->funcs.v_of_s(sol->s_at(x)); };
    auto deriv = [sol](double x) { return sol->funcs.dv_dx(sol->s_at(x)); };
    return Well("shape_class", std::move(params), std::move(value), std::move(deriv),
                x_min, v_min, asymptote, hint);
}

double closed_form_delta1(const ShapeClassSpec& spec, const PhysicalScale& scale) {
    if (spec.A == 0.0)
        throw std::invalid_argument("closed_form_delta1: A must be nonzero");
    return scale.beta * spec.a2 / (8.0 * spec.A);
}

} // namespace semiwell
