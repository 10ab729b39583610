#pragma once

#include <stdexcept>
#include <string>

namespace semiwell {

/// Runtime failure of a numeric procedure (non-convergence, degenerate
/// turning point, infeasible stencil, missing oracle state, ...).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Requested level does not exist (no root of the quantization condition
/// below the asymptote). Subclass so spectrum assembly can stop cleanly
/// while other numeric failures still propagate.
class no_bound_level : public numeric_error {
public:
    explicit no_bound_level(const std::string& msg) : numeric_error(msg) {}
};

/// A correction scheme was applied to a well it is not defined for
/// (e.g. the improved schemes on a well without an asymptote).
class scheme_error : public std::runtime_error {
public:
    explicit scheme_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace semiwell
