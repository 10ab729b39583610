#pragma once

#include <map>
#include <string>
#include <vector>

#include "semiwell/potential.hpp"

namespace semiwell {

/// Reference spectrum from the finite-difference eigensolver.
/// Eigenvalues are Richardson-extrapolated from the (N, 2N-1) grid pair;
/// error_estimate[k] = |eps_k(N) - eps_k(2N-1)| / 3 estimates the
/// remaining discretization error of the finer grid.
struct OracleSpectrum {
    std::vector<double> eigenvalues;
    std::vector<double> error_estimate;
    double L = 0.0; ///< half-width actually used
    int N = 0;      ///< base grid point count of the Richardson pair
};

struct FdOptions {
    double L = 0.0;            ///< half-width; 0 selects a per-well default
    int N = 4001;              ///< grid points, odd, >= 501
    int m = 1;                 ///< number of eigenvalues requested
    bool auto_scale_L = true;  ///< grow L for weakly bound states (decay length ~ beta/sqrt(U - eps0))
    bool check_boundary = true;///< compare against a 1.5 L run at fixed spacing
    bool allow_fewer = false;  ///< return fewer than m bound states instead of throwing
};

/// Eigenvalues of -beta^2 psi'' + V psi = eps psi on [-L, L] with
/// Dirichlet ends, three-point Laplacian, Sturm-sequence bisection on the
/// symmetric tridiagonal matrix. For wells with an asymptote U only
/// eigenvalues below U minus their error estimate count as bound.
OracleSpectrum fd_spectrum(const Well& well, const PhysicalScale& scale, const FdOptions& opts);

/// Strict form: throws numeric_error when the well holds fewer than m
/// bound states.
OracleSpectrum fd_spectrum(const Well& well, const PhysicalScale& scale,
                           double L, int N, int m);

/// Closed-form reference levels: "harmonic" -> beta (2n + 1);
/// "tanh2" -> U - beta^2 (s - n)^2 with s = (-1 + sqrt(1 + 4U/beta^2))/2,
/// defined for n < s. Throws std::invalid_argument for other names or
/// levels that do not exist.
double analytic_spectrum(const std::string& name, const std::map<std::string, double>& params,
                         const PhysicalScale& scale, int n);

} // namespace semiwell
