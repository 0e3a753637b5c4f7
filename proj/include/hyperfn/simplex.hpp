#ifndef HYPERFN_SIMPLEX_HPP
#define HYPERFN_SIMPLEX_HPP

#include <optional>
#include <vector>

#include "hyperfn/rational.hpp"

namespace hyperfn {

enum class Relation { Le, Ge, Eq };

struct LinearConstraint {
    RationalVector coeffs;
    Relation rel = Relation::Le;
    Rational rhs = 0;
};

struct LpSolution {
    Rational objective;
    RationalVector x;
};

// Exact two-phase simplex (Bland's rule) over free variables.
// Returns nullopt when infeasible; throws Error when unbounded.
std::optional<LpSolution> lp_maximize(const RationalVector& objective,
                                      const std::vector<LinearConstraint>& constraints);

// Feasibility of the constraint system; optionally returns a witness point.
bool lp_feasible(const std::vector<LinearConstraint>& constraints,
                 RationalVector* witness = nullptr);

}  // namespace hyperfn

#endif
