#ifndef HYPERFN_GROWTH_HPP
#define HYPERFN_GROWTH_HPP

#include <optional>
#include <span>

#include "hyperfn/cone.hpp"
#include "hyperfn/expr.hpp"

namespace hyperfn {

enum class GrowthKind { SlowlyIncreasing, ExponentiallyDecreasingOn, Unclassified };

struct GrowthClass {
    GrowthKind kind = GrowthKind::Unclassified;
    std::optional<ConvexCone> cone;  // set for ExponentiallyDecreasingOn

    static GrowthClass slowly_increasing() { return {GrowthKind::SlowlyIncreasing, {}}; }
    static GrowthClass exponentially_decreasing_on(ConvexCone c) {
        return {GrowthKind::ExponentiallyDecreasingOn, std::move(c)};
    }
    static GrowthClass unclassified() { return {}; }
};

// Upper bound on the exponential growth rate of |e| along the real direction
// d (poly factors count as rate zero).  nullopt when the structural calculus
// cannot bound the expression.  When `credit_logistic_decay` is false,
// 1/(1+e^L) factors are bounded by a constant instead of their decay; that
// keeps the bound convex in d, so corner directions dominate.
std::optional<double> growth_rate(const Expr& e, std::span<const double> d,
                                  std::size_t dim, bool credit_logistic_decay);

// Rule-based classification relative to the wedge cone carrying the term.
// Never returns a false positive; Unclassified is the fallback.
GrowthClass classify_growth(const Expr& e, const ConvexCone& cone);

// Certified exponential decay of e in both directions of every coordinate
// axis corner of R^dim (the contour-integrability test).
bool decays_everywhere(const Expr& e, std::size_t dim);

}  // namespace hyperfn

#endif
