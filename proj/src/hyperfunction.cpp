#include "hyperfn/hyperfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hyperfn/errors.hpp"

namespace hyperfn {
namespace {

std::vector<Complex> probe_point(std::span<const double> x, double eps,
                                 std::span<const double> v) {
    std::vector<Complex> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = Complex(x[i], eps * v[i]);
    return z;
}

// Deterministic real probe base points used by the infinite-product Cauchy
// check.  Kept small so the probes stay on a compact set near the cone axis.
std::vector<std::vector<double>> probe_grid(std::size_t dim) {
    static const double seeds[] = {0.046, -0.151, 0.256, 0.116, -0.055, 0.197};
    std::vector<std::vector<double>> grid;
    for (int g = 0; g < 3; ++g) {
        std::vector<double> x(dim);
        for (std::size_t i = 0; i < dim; ++i) x[i] = seeds[(g + 2 * i) % 6];
        grid.push_back(std::move(x));
    }
    return grid;
}

}  // namespace

BoundaryValueTerm::BoundaryValueTerm(ExprPtr expr, ConvexCone cone, std::string provenance)
    : BoundaryValueTerm(std::move(expr), cone, GrowthClass::unclassified(),
                        std::move(provenance)) {
    growth_ = classify_growth(*expr_, cone_);
}

BoundaryValueTerm::BoundaryValueTerm(ExprPtr expr, ConvexCone cone, GrowthClass growth,
                                     std::string provenance)
    : expr_(std::move(expr)),
      cone_(std::move(cone)),
      growth_(std::move(growth)),
      provenance_(std::move(provenance)) {
    if (!is_open_nonempty(cone_))
        throw ConeEmpty("boundary term: cone has empty interior: " + cone_.to_string());
}

BoundaryValueTerm::BoundaryValueTerm(Evaluator fn, ConvexCone cone, GrowthClass growth,
                                     std::string provenance)
    : fn_(std::move(fn)),
      cone_(std::move(cone)),
      growth_(std::move(growth)),
      provenance_(std::move(provenance)) {
    if (!is_open_nonempty(cone_))
        throw ConeEmpty("boundary term: cone has empty interior: " + cone_.to_string());
}

TermValue BoundaryValueTerm::evaluate(std::span<const Complex> z,
                                      const EvalOptions& opts) const {
    if (expr_) return TermValue{hyperfn::evaluate(*expr_, z, opts), 0.0};
    return fn_(z);
}

std::vector<double> BoundaryValueTerm::witness_direction() const {
    return to_double_vector(interior_witness(cone_));
}

BoundaryValueTerm BoundaryValueTerm::scaled(Complex factor) const {
    if (expr_)
        return BoundaryValueTerm(Expr::mul(Expr::constant(factor), expr_), cone_, growth_,
                                 provenance_);
    Evaluator base = fn_;
    return BoundaryValueTerm(
        [base, factor](std::span<const Complex> z) {
            TermValue v = base(z);
            return TermValue{factor * v.value, std::abs(factor) * v.err};
        },
        cone_, growth_, provenance_);
}

Hyperfunction::Hyperfunction(std::size_t dimension, std::vector<BoundaryValueTerm> terms)
    : dim_(dimension), terms_(std::move(terms)) {
    for (const auto& t : terms_)
        if (t.cone().dimension() != dim_)
            throw DimensionMismatch("hyperfunction: term dimension mismatch");
}

Hyperfunction Hyperfunction::negated() const {
    std::vector<BoundaryValueTerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(t.scaled(Complex(-1.0, 0.0)));
    return Hyperfunction(dim_, std::move(out));
}

Hyperfunction add(const Hyperfunction& f, const Hyperfunction& g) {
    if (f.dimension() != g.dimension())
        throw DimensionMismatch("add: hyperfunction dimensions differ");
    std::vector<BoundaryValueTerm> terms = f.terms();
    terms.insert(terms.end(), g.terms().begin(), g.terms().end());
    return Hyperfunction(f.dimension(), std::move(terms));
}

Hyperfunction product(const Hyperfunction& f, const Hyperfunction& g) {
    if (f.dimension() != g.dimension())
        throw DimensionMismatch("product: hyperfunction dimensions differ");
    std::vector<BoundaryValueTerm> out;
    for (std::size_t j = 0; j < f.terms().size(); ++j) {
        for (std::size_t k = 0; k < g.terms().size(); ++k) {
            const auto& tf = f.terms()[j];
            const auto& tg = g.terms()[k];
            ConvexCone meet = intersect_cones({tf.cone(), tg.cone()});
            if (!is_open_nonempty(meet)) {
                std::ostringstream os;
                os << "product undefined: cones of terms (" << j << "," << k
                   << ") have empty intersection";
                throw ProductUndefined(os.str(), j, k);
            }
            if (!tf.expr() || !tg.expr())
                throw Unsupported("product: requires expression-backed terms");
            ExprPtr e = Expr::mul(tf.expr(), tg.expr());
            ConvexCone pruned = meet.pruned();
            GrowthClass growth = classify_growth(*e, pruned);
            out.emplace_back(std::move(e), std::move(pruned), std::move(growth),
                             tf.provenance() + "*" + tg.provenance());
        }
    }
    return Hyperfunction(f.dimension(), std::move(out));
}

InfiniteProductResult infinite_product(const std::function<BoundaryValueTerm(long)>& factor,
                                       long order, double cauchy_tol) {
    if (order < 1) throw Error("infinite_product: order must be >= 1");

    // Incrementally intersect the factor cones, keeping a pruned working set.
    BoundaryValueTerm first = factor(1);
    const std::size_t dim = first.cone().dimension();
    std::vector<HalfSpace> working;
    std::vector<ExprPtr> factors;
    if (!first.expr()) throw Unsupported("infinite_product: requires expression factors");
    factors.push_back(first.expr());

    auto absorb = [&](const ConvexCone& c, bool allow_new) -> bool {
        for (const auto& h : c.halfspaces()) {
            ConvexCone current(dim, working);
            // implied iff {current >= 1, h <= 0} infeasible
            ConvexCone with_h(dim, {h});
            if (cone_subset(current, with_h)) continue;
            if (!allow_new) return false;
            working.push_back(h);
            ConvexCone merged(dim, working);
            working = merged.pruned().halfspaces();
        }
        return true;
    };
    absorb(first.cone(), true);

    for (long k = 2; k <= order; ++k) {
        BoundaryValueTerm t = factor(k);
        if (!t.expr()) throw Unsupported("infinite_product: requires expression factors");
        if (t.cone().dimension() != dim)
            throw DimensionMismatch("infinite_product: factor dimension mismatch");
        // Pairwise intersections must stay open; the nested working cone is
        // contained in every earlier cone, so checking against the current
        // working set suffices.
        ConvexCone meet = intersect_cones({ConvexCone(dim, working), t.cone()});
        if (!is_open_nonempty(meet))
            throw ProductUndefined("infinite_product: factor cone kills the intersection",
                                   static_cast<std::size_t>(k), 0);
        absorb(t.cone(), true);
        factors.push_back(t.expr());
    }

    ConvexCone cone(dim, working);
    if (!is_open_nonempty(cone))
        throw ProductUndefined("infinite_product: empty cone intersection", 0, 0);

    // Certificate window: cones past the truncation must add no constraint.
    for (long k = order + 1; k <= order + 50; ++k) {
        BoundaryValueTerm t = factor(k);
        if (!absorb(t.cone(), false))
            throw ConvergenceError(
                "infinite_product: cone intersection not stabilized at truncation", 0.0);
    }

    // Cauchy probe: compare partial products at order and 2*order on a small
    // wedge grid.
    const auto witness = to_double_vector(interior_witness(cone));
    double estimate = 0.0;
    const EvalOptions opts;
    for (const auto& x : probe_grid(dim)) {
        std::vector<Complex> z = probe_point(x, 1.0, witness);
        Complex p{1.0, 0.0};
        bool diverged = false;
        Complex at_order{0.0, 0.0};
        for (long k = 1; k <= 2 * order; ++k) {
            Complex fk;
            try {
                fk = (k <= order) ? evaluate(*factors[static_cast<std::size_t>(k - 1)], z, opts)
                                  : evaluate(*factor(k).expr(), z, opts);
            } catch (const InternalError&) {
                diverged = true;
                break;
            }
            p *= fk;
            if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
                diverged = true;
                break;
            }
            if (k == order) at_order = p;
        }
        if (diverged)
            throw ConvergenceError("infinite_product: partial products diverge on probe grid",
                                   std::numeric_limits<double>::infinity());
        estimate = std::max(estimate, std::abs(p - at_order));
    }
    if (estimate > cauchy_tol)
        throw ConvergenceError("infinite_product: Cauchy estimate above tolerance", estimate);

    ExprPtr prod = Expr::product(std::move(factors));
    GrowthClass growth = classify_growth(*prod, cone);
    return InfiniteProductResult{BoundaryValueTerm(std::move(prod), std::move(cone),
                                                   std::move(growth), "infinite_product"),
                                 estimate};
}

std::vector<double> default_eps_sequence() {
    std::vector<double> eps;
    for (int k = 4; k <= 14; ++k) eps.push_back(std::ldexp(1.0, -k));
    return eps;
}

TermValue wedge_evaluate(const Hyperfunction& f, std::span<const Complex> z,
                         const EvalOptions& opts) {
    if (z.size() != f.dimension())
        throw DimensionMismatch("wedge_evaluate: point dimension mismatch");
    TermValue out;
    for (const auto& t : f.terms()) {
        TermValue v = t.evaluate(z, opts);
        out.value += v.value;
        out.err += v.err;
    }
    return out;
}

BoundaryEvalResult boundary_evaluate(const Hyperfunction& f, std::span<const double> x,
                                     std::span<const double> eps_sequence) {
    BoundaryEvalResult out;
    if (x.size() != f.dimension())
        throw DimensionMismatch("boundary_evaluate: point dimension mismatch");
    if (eps_sequence.size() < 2) throw Error("boundary_evaluate: need at least two eps levels");

    if (f.terms().empty()) {
        out.value = 0.0;
        out.err = 0.0;
        return out;
    }

    std::vector<std::vector<double>> witnesses;
    witnesses.reserve(f.terms().size());
    for (const auto& t : f.terms()) witnesses.push_back(t.witness_direction());

    std::vector<Complex> sums;
    double max_term_err = 0.0;
    for (double eps : eps_sequence) {
        Complex s{0.0, 0.0};
        for (std::size_t j = 0; j < f.terms().size(); ++j) {
            const auto z = probe_point(x, eps, witnesses[j]);
            try {
                TermValue v = f.terms()[j].evaluate(z);
                s += v.value;
                max_term_err = std::max(max_term_err, v.err);
            } catch (const PoleError& pe) {
                out.status = BoundaryEvalResult::Status::Blocked;
                out.note = std::string("probe blocked by pole: ") + pe.what();
                return out;
            } catch (const ContourBlocked& cb) {
                out.status = BoundaryEvalResult::Status::Blocked;
                out.note = cb.what();
                return out;
            } catch (const NotIntegrable& ni) {
                out.status = BoundaryEvalResult::Status::Blocked;
                out.note = ni.what();
                return out;
            }
        }
        sums.push_back(s);
    }

    // Divergence screen: magnitudes monotonically exploding along the tail.
    const std::size_t m = sums.size();
    if (m >= 4) {
        bool growing = true;
        for (std::size_t i = m - 3; i < m; ++i)
            if (std::abs(sums[i]) <= std::abs(sums[i - 1])) { growing = false; break; }
        if (growing && std::abs(sums.back()) > 100.0 * (std::abs(sums.front()) + 1.0)) {
            out.status = BoundaryEvalResult::Status::Divergent;
            std::ostringstream os;
            os << "diverging probe magnitudes " << std::abs(sums.front()) << " -> "
               << std::abs(sums.back());
            out.note = os.str();
            return out;
        }
    }

    // Richardson in eps (ratio 2), three extrapolation levels.
    const std::size_t levels = std::min<std::size_t>(3, m - 1);
    std::vector<std::vector<Complex>> t(m);
    for (std::size_t i = 0; i < m; ++i) {
        t[i].resize(levels + 1);
        t[i][0] = sums[i];
    }
    for (std::size_t j = 1; j <= levels; ++j) {
        const double p = std::ldexp(1.0, static_cast<int>(j));  // 2^j
        for (std::size_t i = j; i < m; ++i)
            t[i][j] = (p * t[i][j - 1] - t[i - 1][j - 1]) / (p - 1.0);
    }
    out.value = t[m - 1][levels];
    const Complex prev = (levels > 0) ? t[m - 1][levels - 1] : t[m - 2][0];
    out.err = std::abs(out.value - prev) + 3.0 * max_term_err;
    out.status = BoundaryEvalResult::Status::Ok;
    return out;
}

BoundaryEvalResult boundary_evaluate(const Hyperfunction& f, std::span<const double> x) {
    const auto eps = default_eps_sequence();
    return boundary_evaluate(f, x, eps);
}

EqualityVerdict equality_probe(const Hyperfunction& f, const Hyperfunction& g,
                               std::span<const double> window_lo,
                               std::span<const double> window_hi,
                               std::size_t steps_per_axis) {
    if (window_lo.size() != f.dimension() || window_hi.size() != f.dimension())
        throw DimensionMismatch("equality_probe: window dimension mismatch");
    const Hyperfunction diff = add(f, g.negated());

    EqualityVerdict verdict;
    std::vector<std::size_t> idx(f.dimension(), 0);
    const std::size_t total = [&] {
        std::size_t t = 1;
        for (std::size_t i = 0; i < f.dimension(); ++i) t *= steps_per_axis;
        return t;
    }();

    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        std::vector<double> x(f.dimension());
        for (std::size_t i = 0; i < f.dimension(); ++i) {
            const std::size_t s = rem % steps_per_axis;
            rem /= steps_per_axis;
            x[i] = (steps_per_axis == 1)
                       ? window_lo[i]
                       : window_lo[i] + (window_hi[i] - window_lo[i]) *
                                            static_cast<double>(s) /
                                            static_cast<double>(steps_per_axis - 1);
        }
        const auto r = boundary_evaluate(diff, x);
        if (!r.ok()) {
            verdict.skipped.push_back(x);
            continue;
        }
        const double gap = std::abs(r.value);
        if (gap > 10.0 * std::max(r.err, 1e-13)) {
            verdict.consistent_with_equal = false;
            verdict.where = x;
            verdict.gap = gap;
            return verdict;
        }
    }
    return verdict;
}

nlohmann::json to_json(const Hyperfunction& f) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : f.terms()) {
        if (!t.expr())
            throw Unsupported("to_json: evaluator-backed term is not serializable");
        nlohmann::json growth;
        switch (t.growth().kind) {
            case GrowthKind::SlowlyIncreasing: growth = "slowly_increasing"; break;
            case GrowthKind::ExponentiallyDecreasingOn:
                growth = nlohmann::json{
                    {"exponentially_decreasing_on", to_json(*t.growth().cone)}};
                break;
            case GrowthKind::Unclassified: growth = "unclassified"; break;
        }
        arr.push_back(nlohmann::json{{"expr", expr_to_json(*t.expr())},
                                     {"cone", to_json(t.cone())},
                                     {"growth", growth}});
    }
    return nlohmann::json{{"dimension", f.dimension()}, {"terms", arr}};
}

Hyperfunction hyperfunction_from_json(const nlohmann::json& j) {
    const std::size_t dim = j.at("dimension").get<std::size_t>();
    std::vector<BoundaryValueTerm> terms;
    for (const auto& tj : j.at("terms")) {
        ExprPtr e = expr_from_json(tj.at("expr"));
        ConvexCone cone = cone_from_json(tj.at("cone"), dim);
        const auto& gj = tj.at("growth");
        GrowthClass growth = GrowthClass::unclassified();
        if (gj.is_string() && gj.get<std::string>() == "slowly_increasing")
            growth = GrowthClass::slowly_increasing();
        else if (gj.is_object() && gj.contains("exponentially_decreasing_on"))
            growth = GrowthClass::exponentially_decreasing_on(
                cone_from_json(gj.at("exponentially_decreasing_on"), dim));
        terms.emplace_back(std::move(e), std::move(cone), std::move(growth));
    }
    return Hyperfunction(dim, std::move(terms));
}

}  // namespace hyperfn
