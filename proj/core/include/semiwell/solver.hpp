#pragma once

#include <optional>
#include <vector>

#include "semiwell/correction.hpp"
#include "semiwell/potential.hpp"
#include "semiwell/quadrature.hpp"

namespace semiwell {

struct SolverConfig {
    double eps_rel_tol = 1e-12;  ///< relative tolerance on the root in eps
    double residual_tol = 1e-8;  ///< bound on |Phi - delta - (n + 1/2)| at the solution
    double bottom_offset = 1e-9; ///< h0 scale: brackets start at V_min + h0
    bool per_level_q = false;    ///< diagnostics: recompute q at each level's energy
};

/// One solved level of the quantization condition.
struct LevelRecord {
    int n = 0;
    double eps = 0.0;
    double delta = 0.0;          ///< shift applied by the scheme at eps
    double delta1 = 0.0;         ///< numeric delta1 at eps (nan if its stencil failed)
    std::optional<double> q;     ///< improved schemes only
    std::optional<double> mu;    ///< 1 - q, improved schemes only
    double gamma = 0.0;          ///< d delta / d n at this level
    double residual = 0.0;       ///< |Phi(eps) - delta - (n + 1/2)|, re-evaluated after the solve
    double bracket = 0.0;        ///< final root interval width
};

enum class Termination { NoRootBelowAsymptote, MaxLevelReached };

struct SpectrumReport {
    std::string well_name;
    std::vector<std::pair<std::string, double>> well_params;
    Scheme scheme = Scheme::Plain;
    double beta = 1.0;
    std::vector<LevelRecord> levels;
    Termination termination = Termination::MaxLevelReached;
};

/// Solve Phi(eps) - delta(eps) = n + 1/2 for eps by bracketed bisection
/// refined with safeguarded secant steps. Throws no_bound_level when the
/// well holds fewer than n+1 states, scheme_error when the scheme is
/// inapplicable to the well.
LevelRecord solve_level(const Well& well, Scheme scheme, int n,
                        const PhysicalScale& scale, const QuadratureConfig& cfg,
                        const SolverConfig& solver = {});

/// Levels n = 0, 1, ... up to n_max or the first nonexistent level.
SpectrumReport spectrum(const Well& well, Scheme scheme, int n_max,
                        const PhysicalScale& scale, const QuadratureConfig& cfg,
                        const SolverConfig& solver = {});

/// gamma = d delta / d n by the chain rule:
/// (d delta/d eps) / (d Phi/d eps - d delta/d eps), both derivatives by
/// central differences with the eps-stencil step.
double gamma(const Well& well, Scheme scheme, const LevelRecord& record,
             const PhysicalScale& scale, const QuadratureConfig& cfg);

} // namespace semiwell
