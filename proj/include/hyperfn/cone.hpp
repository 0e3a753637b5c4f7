#ifndef HYPERFN_CONE_HPP
#define HYPERFN_CONE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "hyperfn/rational.hpp"

namespace hyperfn {

// An integer/rational linear functional on Lie(T x S^1)-type coordinate
// space.  Evaluation is the exact rational dot product.
class Weight {
  public:
    explicit Weight(RationalVector coefficients);

    const RationalVector& coefficients() const { return coeffs_; }
    std::size_t dimension() const { return coeffs_.size(); }

    Rational operator()(const RationalVector& y) const { return dot(coeffs_, y); }

    Weight negated() const;

    bool operator==(const Weight& other) const { return coeffs_ == other.coeffs_; }

    std::string to_string() const;

  private:
    RationalVector coeffs_;
};

// Open half-space { y : w(y) > 0 }.
struct HalfSpace {
    Weight weight;

    bool contains(const RationalVector& y) const { return weight(y) > 0; }
};

HalfSpace halfspace_of_weight(const Weight& w);

// Open convex polyhedral cone: finite intersection of open half-spaces.
// The empty half-space list is R^n itself.  Stored without canonicalization;
// membership semantics are the contract, not representation uniqueness.
class ConvexCone {
  public:
    explicit ConvexCone(std::size_t dimension, std::vector<HalfSpace> halfspaces = {});

    static ConvexCone full_space(std::size_t dimension) { return ConvexCone(dimension); }

    std::size_t dimension() const { return dim_; }
    const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }

    bool contains(const RationalVector& y) const;

    // Removes half-spaces the LP certifies as redundant.  Membership is
    // unchanged.
    ConvexCone pruned() const;

    std::string to_string() const;

  private:
    std::size_t dim_;
    std::vector<HalfSpace> halfspaces_;
};

ConvexCone intersect_cones(const std::vector<ConvexCone>& cones);

// Exact decision: does the cone have nonempty interior?  (LP feasibility of
// { w_i(y) >= 1 } after homogeneous rescaling.)
bool is_open_nonempty(const ConvexCone& c);

bool contains(const ConvexCone& c, const RationalVector& y);

// Open-cone containment a (subset of) b, decided exactly.
bool cone_subset(const ConvexCone& a, const ConvexCone& b);
bool same_membership(const ConvexCone& a, const ConvexCone& b);

// Generators of the closure of c: extreme-ray directions plus a +/- basis of
// the lineality space.  Conic hull equals the closure.
std::vector<RationalVector> cone_generators(const ConvexCone& c);

// Polar dual { xi : xi(y) >= 0 for all y in c }, returned through the
// half-space description induced by the generators of c.  The interior of
// the result may be empty (e.g. the dual of a half-space is a ray).
ConvexCone polar_dual(const ConvexCone& c);

ConvexCone negated_cone(const ConvexCone& c);

// Deterministic interior probe direction: maximizes the minimal defining
// functional subject to sum|y_i| = 1.  Memoized per cone.
RationalVector interior_witness(const ConvexCone& c);

struct PolarizedWeightSet {
    std::vector<Weight> original;
    std::vector<Weight> polarized;  // each +/- the original, positive on xi
    int sign = 1;                   // parity (-1)^{#flips}
    ConvexCone cone;                // intersection of polarized half-spaces
};

// Flips weights so every one evaluates positively on xi.  A weight that
// vanishes on xi is rejected (the offending weight is named).
PolarizedWeightSet polarize(const std::vector<Weight>& weights, const RationalVector& xi);

// JSON forms: weight = array of "p/q" strings, cone = array of weights.
nlohmann::json to_json(const Weight& w);
nlohmann::json to_json(const ConvexCone& c);
Weight weight_from_json(const nlohmann::json& j);
ConvexCone cone_from_json(const nlohmann::json& j, std::size_t dimension_if_empty);

}  // namespace hyperfn

#endif
