#include "semiwell/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "semiwell/errors.hpp"

namespace semiwell {

namespace {

// Sturm-sequence eigenvalue count for the symmetric tridiagonal matrix
// with diagonal d and constant off-diagonal e: number of eigenvalues
// strictly below lambda. pivmin keeps e2/q away from overflow.
int count_below(const std::vector<double>& d, double e2, double pivmin, double lambda) {
    double q = d[0] - lambda;
    if (std::abs(q) < pivmin) q = -pivmin;
    int count = q < 0.0 ? 1 : 0;
    for (std::size_t i = 1; i < d.size(); ++i) {
        q = d[i] - lambda - e2 / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

// lowest m eigenvalues by bisection on the Sturm count
std::vector<double> lowest_eigenvalues(const std::vector<double>& d, double e, int m) {
    const double ae = std::abs(e);
    double glo = d[0] - 2.0 * ae, ghi = d[0] + 2.0 * ae;
    for (double di : d) {
        glo = std::min(glo, di - 2.0 * ae);
        ghi = std::max(ghi, di + 2.0 * ae);
    }
    const double e2 = e * e;
    const double pivmin = std::max(e2 * std::numeric_limits<double>::min() * 1e20,
                                   std::numeric_limits<double>::min());
    std::vector<double> out;
    out.reserve(m);
    for (int k = 0; k < m; ++k) {
        double lo = glo, hi = ghi;
        for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() *
                                                      std::max(std::abs(lo), std::abs(hi));
             ++it) {
            const double mid = 0.5 * (lo + hi);
            if (count_below(d, e2, pivmin, mid) >= k + 1) hi = mid; else lo = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

// lowest m eigenvalues of the Dirichlet discretization on [-L, L] with N points
std::vector<double> fd_grid(const Well& well, const PhysicalScale& scale, double L, int N,
                            int m) {
    const double h = 2.0 * L / (N - 1);
    const double kin = scale.beta * scale.beta / (h * h);
    std::vector<double> diag(N - 2);
    for (int i = 1; i <= N - 2; ++i) diag[i - 1] = 2.0 * kin + well.value(-L + i * h);
    return lowest_eigenvalues(diag, -kin, m);
}

int make_odd(double n) {
    auto k = static_cast<long long>(std::llround(n));
    if (k % 2 == 0) ++k;
    return static_cast<int>(k);
}

double default_half_width(const Well& well) {
    if (well.asymptote())
        return std::max(15.0, 1.5 * well.domain_hint().value_or(10.0));
    return 12.0;
}

} // namespace

OracleSpectrum fd_spectrum(const Well& well, const PhysicalScale& scale, const FdOptions& opts) {
    if (opts.N < 501 || opts.N % 2 == 0)
        throw std::invalid_argument("fd_spectrum: N must be odd and >= 501");
    if (opts.m < 1) throw std::invalid_argument("fd_spectrum: m must be >= 1");
    if (opts.L < 0.0) throw std::invalid_argument("fd_spectrum: L must be positive");

    double L = opts.L > 0.0 ? opts.L : default_half_width(well);
    const double h_target = 2.0 * L / (opts.N - 1);

    if (well.asymptote()) {
        const double U = *well.asymptote();
        if (well.value(L) < U * (1.0 - 1e-10) || well.value(-L) < U * (1.0 - 1e-10))
            throw numeric_error("fd_spectrum: L too small, V(+-L) has not reached the "
                                "asymptote");
        if (opts.auto_scale_L) {
            // weakly bound ground states decay on beta/sqrt(U - eps0);
            // grow L from a coarse pass until it covers ten decay lengths
            double Lc = L;
            for (int pass = 0; pass < 8; ++pass) {
                const int Nc = std::max(501, make_odd(2.0 * Lc / std::max(h_target, Lc / 4000.0)) );
                const double e0 = fd_grid(well, scale, Lc, Nc, 1)[0];
                if (e0 >= U) { Lc *= 4.0; continue; }
                const double need = 10.0 * scale.beta / std::sqrt(U - e0);
                if (Lc >= need) break;
                // the finite box biases e0 upward, so `need` only shrinks as
                // L grows; cap the growth to avoid a single huge overshoot
                Lc = std::min(1.2 * need, 4.0 * Lc);
            }
            L = std::max(L, Lc);
        }
    }

    const int N = std::max(opts.N, make_odd(2.0 * L / h_target) );
    const int N_fine = 2 * N - 1;

    std::vector<double> coarse = fd_grid(well, scale, L, N, opts.m);
    std::vector<double> fine = fd_grid(well, scale, L, N_fine, opts.m);

    if (opts.check_boundary) {
        // same spacing, 1.5x the box: bound-state energies must not move
        const double L2 = 1.5 * L;
        const int N2 = make_odd((N - 1) * 1.5 + 1.0);
        std::vector<double> wide = fd_grid(well, scale, L2, N2, opts.m);
        for (int k = 0; k < opts.m; ++k) {
            const bool bound_here =
                !well.asymptote() || coarse[k] < *well.asymptote();
            if (bound_here &&
                std::abs(wide[k] - coarse[k]) > 1e-8 * std::max(1.0, std::abs(coarse[k])))
                throw numeric_error("fd_spectrum: L too small, eigenvalues shift when the "
                                    "box is widened");
        }
    }

    OracleSpectrum out;
    out.L = L;
    out.N = N;
    for (int k = 0; k < opts.m; ++k) {
        const double extrapolated = (4.0 * fine[k] - coarse[k]) / 3.0;
        const double estimate = std::abs(coarse[k] - fine[k]) / 3.0;
        if (well.asymptote() && !(extrapolated < *well.asymptote() - estimate))
            break; // continuum reached; higher entries are not bound
        out.eigenvalues.push_back(extrapolated);
        out.error_estimate.push_back(estimate);
    }
    if (!opts.allow_fewer && static_cast<int>(out.eigenvalues.size()) < opts.m) {
        std::ostringstream os;
        os << "fd_spectrum: requested m=" << opts.m << " levels but only "
           << out.eigenvalues.size() << " bound states exist";
        throw numeric_error(os.str());
    }
    if (!well.asymptote()) {
        // coverage: the box must dominate the highest reported level
        const double top = out.eigenvalues.back();
        if (std::min(well.value(L), well.value(-L)) < 1.25 * top)
            throw numeric_error("fd_spectrum: L too small, V(+-L) does not cover the "
                                "requested levels");
    }
    return out;
}

OracleSpectrum fd_spectrum(const Well& well, const PhysicalScale& scale, double L, int N,
                           int m) {
    FdOptions opts;
    opts.L = L;
    opts.N = N;
    opts.m = m;
    return fd_spectrum(well, scale, opts);
}

double analytic_spectrum(const std::string& name, const std::map<std::string, double>& params,
                         const PhysicalScale& scale, int n) {
    if (n < 0) throw std::invalid_argument("analytic_spectrum: n must be >= 0");
    const double beta = scale.beta;
    if (name == "harmonic") return beta * (2.0 * n + 1.0);
    if (name == "tanh2") {
        auto it = params.find("U");
        if (it == params.end() || !(it->second > 0.0))
            throw std::invalid_argument("analytic_spectrum: tanh2 requires U > 0");
        const double U = it->second;
        const double s = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * U / (beta * beta)));
        if (!(n < s)) {
            std::ostringstream os;
            os << "analytic_spectrum: tanh2 has no bound state n=" << n << " (s=" << s << ")";
            throw std::invalid_argument(os.str());
        }
        const double d = s - n;
        return U - beta * beta * d * d;
    }
    throw std::invalid_argument("analytic_spectrum: unsupported well '" + name + "'");
}

} // namespace semiwell
