#ifndef HYPERFN_HYPERFUNCTION_HPP
#define HYPERFN_HYPERFUNCTION_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hyperfn/cone.hpp"
#include "hyperfn/expr.hpp"
#include "hyperfn/growth.hpp"

namespace hyperfn {

struct TermValue {
    Complex value{0.0, 0.0};
    double err = 0.0;
};

// One boundary-value summand: a defining function on the wedge with the
// given open cone.  Backed either by an expression tree or by an opaque
// evaluator (quadrature-defined Fourier data).
class BoundaryValueTerm {
  public:
    using Evaluator = std::function<TermValue(std::span<const Complex>)>;

    BoundaryValueTerm(ExprPtr expr, ConvexCone cone, std::string provenance = "");
    BoundaryValueTerm(ExprPtr expr, ConvexCone cone, GrowthClass growth,
                      std::string provenance = "");
    BoundaryValueTerm(Evaluator fn, ConvexCone cone, GrowthClass growth,
                      std::string provenance = "");

    const ConvexCone& cone() const { return cone_; }
    const ExprPtr& expr() const { return expr_; }  // null for evaluator-backed terms
    const GrowthClass& growth() const { return growth_; }
    const std::string& provenance() const { return provenance_; }

    TermValue evaluate(std::span<const Complex> z, const EvalOptions& opts = {}) const;

    // Probe direction for boundary limits: the cone's interior witness.
    std::vector<double> witness_direction() const;

    BoundaryValueTerm scaled(Complex factor) const;

  private:
    ExprPtr expr_;
    Evaluator fn_;
    ConvexCone cone_;
    GrowthClass growth_;
    std::string provenance_;
};

// Finite formal sum of boundary-value terms sharing one ambient dimension.
class Hyperfunction {
  public:
    explicit Hyperfunction(std::size_t dimension, std::vector<BoundaryValueTerm> terms = {});

    std::size_t dimension() const { return dim_; }
    const std::vector<BoundaryValueTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    Hyperfunction negated() const;

  private:
    std::size_t dim_;
    std::vector<BoundaryValueTerm> terms_;
};

// Concatenation of term lists; no simplification.
Hyperfunction add(const Hyperfunction& f, const Hyperfunction& g);

// Pairwise products (F_j G_k, cone_j intersect cone_k).  Every pairwise cone
// intersection must be open nonempty, else ProductUndefined.
Hyperfunction product(const Hyperfunction& f, const Hyperfunction& g);

struct InfiniteProductResult {
    BoundaryValueTerm term;
    double truncation_estimate;  // |P_2K - P_K| on the probe grid
};

// Truncated infinite product of generated factor terms.  Requires the cone
// intersection to stabilize by k <= order (checked on a certificate window)
// and the partial products to Cauchy-converge on a probe grid.
InfiniteProductResult infinite_product(
    const std::function<BoundaryValueTerm(long)>& factor, long order,
    double cauchy_tol = 1e-3);

struct BoundaryEvalResult {
    enum class Status { Ok, Blocked, Divergent };
    Complex value{0.0, 0.0};
    double err = 0.0;
    Status status = Status::Ok;
    std::string note;

    bool ok() const { return status == Status::Ok; }
};

std::vector<double> default_eps_sequence();

// Direct sum of the defining functions at a fixed wedge point z (no
// boundary limit).  Valid when Im(z) lies in every term's cone.
TermValue wedge_evaluate(const Hyperfunction& f, std::span<const Complex> z,
                         const EvalOptions& opts = {});

// Richardson-extrapolated limit of the term sums at x + i*eps*witness as
// eps -> 0+.  Meaningful where the hyperfunction is a continuous function.
BoundaryEvalResult boundary_evaluate(const Hyperfunction& f, std::span<const double> x,
                                     std::span<const double> eps_sequence);
BoundaryEvalResult boundary_evaluate(const Hyperfunction& f, std::span<const double> x);

struct EqualityVerdict {
    bool consistent_with_equal = true;
    std::vector<double> where;  // a distinguishing point, when found
    double gap = 0.0;
    std::vector<std::vector<double>> skipped;  // blocked or divergent probes

    bool distinguished() const { return !consistent_with_equal; }
};

// Heuristic equality probe on a real box: evaluates f - g on a grid and
// reports Distinguished when a value exceeds 10x its error estimate.  Never
// claims proof of equality.
EqualityVerdict equality_probe(const Hyperfunction& f, const Hyperfunction& g,
                               std::span<const double> window_lo,
                               std::span<const double> window_hi,
                               std::size_t steps_per_axis = 11);

nlohmann::json to_json(const Hyperfunction& f);
Hyperfunction hyperfunction_from_json(const nlohmann::json& j);

}  // namespace hyperfn

#endif
