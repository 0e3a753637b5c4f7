#ifndef HYPERFN_ERRORS_HPP
#define HYPERFN_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace hyperfn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation hit the polar locus of an expression (or came within tolerance
// of it).  Carries the offending denominator value.
struct PoleError : Error {
    PoleError(const std::string& what, std::complex<double> den)
        : Error(what), denominator(den) {}
    std::complex<double> denominator;
};

// NaN or infinity propagated through an evaluation.
struct InternalError : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// A product of boundary-value terms whose cones fail to intersect.
struct ProductUndefined : Error {
    ProductUndefined(const std::string& what, std::size_t lhs, std::size_t rhs)
        : Error(what), lhs_term(lhs), rhs_term(rhs) {}
    std::size_t lhs_term = 0;
    std::size_t rhs_term = 0;
};

// An infinite product whose partial products fail the Cauchy probe.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double est)
        : Error(what), estimate(est) {}
    double estimate = 0.0;
};

struct EvaluationBlocked : Error {
    using Error::Error;
};

// A pole sits on (or too close to) the contour line.
struct ContourBlocked : Error {
    using Error::Error;
};

// Integrand tail fails to decay on the contour.
struct NotIntegrable : Error {
    using Error::Error;
};

struct NotSlowlyIncreasing : Error {
    using Error::Error;
};

// Weight list admits no common open half-space (moment map not proper).
struct ConeEmpty : Error {
    using Error::Error;
};

struct NoPeriodicSolution : Error {
    using Error::Error;
};

struct TrivialCase : Error {
    using Error::Error;
};

struct Unsupported : Error {
    using Error::Error;
};

}  // namespace hyperfn

#endif
