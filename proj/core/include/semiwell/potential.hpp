#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace semiwell {

/// beta with beta^2 = hbar^2 / (2m); the only physical scale entering the
/// quantization condition.
struct PhysicalScale {
    double beta = 1.0;

    PhysicalScale() = default;
    explicit PhysicalScale(double b);
};

/// One-dimensional potential well: evaluatable V(x) and dV/dx plus the
/// metadata the quadrature and solver layers need. Immutable after
/// construction; safe for unrestricted concurrent reads.
class Well {
public:
    Well(std::string name,
         std::vector<std::pair<std::string, double>> params,
         std::function<double(double)> value,
         std::function<double(double)> derivative,
         double x_min, double v_min,
         std::optional<double> asymptote,
         std::optional<double> domain_hint);

    double value(double x) const { return value_(x); }
    double derivative(double x) const { return derivative_(x); }

    double x_min() const { return x_min_; }
    double v_min() const { return v_min_; }

    /// U with V(x) -> U as |x| -> infinity on both sides; absent for
    /// confining wells.
    const std::optional<double>& asymptote() const { return asymptote_; }

    /// Half-width outside which V is within tail tolerance of its
    /// asymptote; absent for confining wells (brackets grow on demand).
    const std::optional<double>& domain_hint() const { return domain_hint_; }

    const std::string& name() const { return name_; }
    const std::vector<std::pair<std::string, double>>& params() const { return params_; }

private:
    std::string name_;
    std::vector<std::pair<std::string, double>> params_;
    std::function<double(double)> value_;
    std::function<double(double)> derivative_;
    double x_min_ = 0.0;
    double v_min_ = 0.0;
    std::optional<double> asymptote_;
    std::optional<double> domain_hint_;
};

/// Parameters of the exactly solvable family V = A^2 s^2 + B s + C with
/// ds/dx = a2 s^2 + a1 s + a0, s(0) = s0.
struct ShapeClassSpec {
    double A = 1.0;
    double B = 0.0;
    double C = 0.0;
    double a0 = 1.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double s0 = 0.0;
};

/// Catalog factory. Names: "harmonic" (V = x^2), "quartic" (V = x^4),
/// "tanh2" (V = U tanh^2 x, requires U > 0), "gauss"
/// (V = U (1 - exp(-x^2/w^2)), requires U > 0, optional w > 0, default 1).
/// Throws std::invalid_argument on unknown names or bad parameters.
Well make_builtin(const std::string& name, const std::map<std::string, double>& params);

/// Build a well from a shape-class spec by integrating ds/dx = sigma(s)
/// numerically over [-half_range, half_range]. The derivative uses the
/// chain-rule identity dV/dx = (2 A^2 s + B) sigma(s). The asymptote is
/// populated when sigma has a real root s* that s approaches at both
/// infinities with equal V-limits. Throws numeric_error if the solution
/// escapes to infinity inside the requested range.
Well from_shape_class(const ShapeClassSpec& spec, const PhysicalScale& scale,
                      double half_range = 30.0);

/// First correction for the exact family: beta * a2 / (8 A), independent
/// of the energy. Throws std::invalid_argument when A = 0.
double closed_form_delta1(const ShapeClassSpec& spec, const PhysicalScale& scale);

} // namespace semiwell
