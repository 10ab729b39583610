#include "semiwell/correction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "semiwell/errors.hpp"

namespace semiwell {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Plain: return "plain";
        case Scheme::FirstOrder: return "first_order";
        case Scheme::Pade: return "pade";
        case Scheme::Improved: return "improved";
        case Scheme::ImprovedSimplified: return "improved_simplified";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& token) {
    std::string t = token;
    std::replace(t.begin(), t.end(), '-', '_');
    if (t == "plain") return Scheme::Plain;
    if (t == "first_order") return Scheme::FirstOrder;
    if (t == "pade") return Scheme::Pade;
    if (t == "improved") return Scheme::Improved;
    if (t == "improved_simplified") return Scheme::ImprovedSimplified;
    throw std::invalid_argument("unknown scheme '" + token + "'");
}

double delta1_numeric(const Well& well, double eps, const PhysicalScale& scale,
                      const QuadratureConfig& cfg) {
    const double h = eps_stencil_step(well, eps, cfg);
    // the coarse and fine stencils share three abscissas; cache converged
    // integral values so they are computed once
    std::map<double, double> cache;
    auto integral = [&](double e) {
        auto it = cache.find(e);
        if (it != cache.end()) return it->second;
        const double v = singular_integral(well, e, cfg);
        cache.emplace(e, v);
        return v;
    };
    const SecondDerivative d2 = d2_wrt_eps(integral, eps, h);
    return scale.beta / (24.0 * std::numbers::pi) * d2.value;
}

double pade_delta(double delta1) {
    return 2.0 * delta1 / (1.0 + std::sqrt(1.0 + 16.0 * delta1 * delta1));
}

double compute_q(double delta1, double phi_at_U, QForm form) {
    if (!std::isfinite(phi_at_U))
        throw std::invalid_argument("compute_q: phi_at_U must be finite");
    if (form == QForm::Product) return -8.0 * delta1 * phi_at_U;
    if (delta1 == 0.0)
        throw numeric_error("compute_q: quotient form is undefined at delta1 = 0");
    return -8.0 * phi_at_U / delta1;
}

double improved_delta(double delta1, double q) {
    const double denom = q + std::sqrt((2.0 - q) * (2.0 - q) + 16.0 * delta1 * delta1);
    if (!(denom > 0.0))
        throw numeric_error("improved_delta: vanishing denominator");
    return 2.0 * delta1 / denom;
}

double simplified_delta1(double phi_at_U) {
    if (!(phi_at_U > 0.0))
        throw std::invalid_argument("simplified_delta1: phi_at_U must be positive");
    return -1.0 / (8.0 * phi_at_U);
}

double apply_scheme(Scheme scheme, const DeltaInputs& inputs) {
    switch (scheme) {
        case Scheme::Plain:
            return 0.0;
        case Scheme::FirstOrder:
            return inputs.delta1;
        case Scheme::Pade:
            return pade_delta(inputs.delta1);
        case Scheme::Improved:
            if (!inputs.phi_at_U || !std::isfinite(*inputs.phi_at_U))
                throw scheme_error("improved scheme requires a finite Phi(U)");
            if (!inputs.q)
                throw scheme_error("improved scheme requires q");
            return improved_delta(inputs.delta1, *inputs.q);
        case Scheme::ImprovedSimplified:
            if (!inputs.phi_at_U || !std::isfinite(*inputs.phi_at_U))
                throw scheme_error("improved scheme requires a finite Phi(U)");
            return improved_delta(inputs.delta1, 1.0);
    }
    throw std::invalid_argument("apply_scheme: unknown scheme");
}

} // namespace semiwell
