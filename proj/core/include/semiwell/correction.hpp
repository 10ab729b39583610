#pragma once

#include <optional>
#include <string>

#include "semiwell/potential.hpp"
#include "semiwell/quadrature.hpp"

namespace semiwell {

/// Level-shift schemes for the quantization condition
/// Phi(eps) = n + 1/2 + delta.
enum class Scheme {
    Plain,              ///< delta = 0
    FirstOrder,         ///< delta = delta1(eps)
    Pade,               ///< delta = 2 d1 / (1 + sqrt(1 + 16 d1^2))
    Improved,           ///< delta = 2 d1 / (q + sqrt((2-q)^2 + 16 d1^2)), q from the well
    ImprovedSimplified, ///< improved form with q = 1 and the -1/(8 Phi(U)) surrogate
};

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& token); // throws std::invalid_argument

/// Which reading of the q definition to use; the product form is the one
/// consistent with the q = 1 class property and the deep-well limit, the
/// quotient form is exposed so the difference can be observed.
enum class QForm { Product, Quotient };

/// Inputs assembled per evaluation of a scheme.
struct DeltaInputs {
    double delta1 = 0.0;
    std::optional<double> phi_at_U; ///< required by the improved schemes
    std::optional<double> q;        ///< required by Scheme::Improved
};

/// delta1 by the quadrature route: (beta / 24 pi) * d^2 I / d eps^2 with
/// I the singular integral, differentiated by the five-point stencil on
/// converged integral values (the integrand itself is never
/// differentiated in eps; the interior derivative kernel would not be
/// integrable).
double delta1_numeric(const Well& well, double eps, const PhysicalScale& scale,
                      const QuadratureConfig& cfg);

/// 2 d1 / (1 + sqrt(1 + 16 d1^2)). Odd, |result| < 1/2, denominator >= 2.
double pade_delta(double delta1);

/// q = -8 * delta1 * phi_at_U (product form). The quotient form
/// -8 * phi_at_U / delta1 throws numeric_error at delta1 = 0.
double compute_q(double delta1, double phi_at_U, QForm form = QForm::Product);

/// 2 d1 / (q + sqrt((2-q)^2 + 16 d1^2)); reduces to pade_delta at q = 1.
double improved_delta(double delta1, double q);

/// delta1 surrogate from q = 1: -1 / (8 phi_at_U). Requires phi_at_U > 0.
double simplified_delta1(double phi_at_U);

/// Pure scheme dispatch on precomputed inputs. Improved schemes require
/// phi_at_U (and q for Scheme::Improved); ImprovedSimplified treats
/// inputs.delta1 as the surrogate value.
double apply_scheme(Scheme scheme, const DeltaInputs& inputs);

} // namespace semiwell
