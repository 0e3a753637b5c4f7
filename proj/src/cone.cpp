#include "hyperfn/cone.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

#include "hyperfn/errors.hpp"
#include "hyperfn/simplex.hpp"

namespace hyperfn {
namespace {

using Matrix = std::vector<RationalVector>;

// Row-echelon rank of a small rational matrix.
std::size_t matrix_rank(Matrix m) {
    std::size_t rank = 0;
    const std::size_t rows = m.size();
    if (rows == 0) return 0;
    const std::size_t cols = m.front().size();
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && m[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[rank], m[piv]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || m[i][col] == 0) continue;
            const Rational f = m[i][col] / m[rank][col];
            for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

// Basis of { y : M y = 0 }.
std::vector<RationalVector> kernel_basis(const Matrix& m, std::size_t cols) {
    Matrix red = m;
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    const std::size_t rows = red.size();
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && red[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(red[rank], red[piv]);
        const Rational p = red[rank][col];
        for (auto& v : red[rank]) v /= p;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || red[i][col] == 0) continue;
            const Rational f = red[i][col];
            for (std::size_t j = 0; j < cols; ++j) red[i][j] -= f * red[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::vector<RationalVector> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        RationalVector v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < rank; ++r) v[pivot_col[r]] = -red[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Clears denominators and divides by the content, keeping the direction.
RationalVector canonical_direction(const RationalVector& v) {
    boost::multiprecision::mpz_int lcm = 1;
    for (const auto& q : v) lcm = boost::multiprecision::lcm(lcm, denominator(q));
    std::vector<boost::multiprecision::mpz_int> ints;
    ints.reserve(v.size());
    boost::multiprecision::mpz_int g = 0;
    for (const auto& q : v) {
        ints.push_back(numerator(q) * (lcm / denominator(q)));
        g = boost::multiprecision::gcd(g, ints.back());
    }
    RationalVector out(v.size(), Rational(0));
    if (g == 0) return out;
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(ints[i] / g);
    return out;
}

Matrix halfspace_matrix(const ConvexCone& c) {
    Matrix m;
    m.reserve(c.halfspaces().size());
    for (const auto& h : c.halfspaces()) m.push_back(h.weight.coefficients());
    return m;
}

std::vector<LinearConstraint> scaled_interior_constraints(const ConvexCone& c) {
    std::vector<LinearConstraint> cons;
    for (const auto& h : c.halfspaces())
        cons.push_back({h.weight.coefficients(), Relation::Ge, Rational(1)});
    return cons;
}

}  // namespace

Weight::Weight(RationalVector coefficients) : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) throw Error("weight: empty coefficient list");
    bool all_zero = true;
    for (const auto& q : coeffs_)
        if (q != 0) { all_zero = false; break; }
    if (all_zero) throw Error("weight: all coefficients vanish");
}

Weight Weight::negated() const {
    RationalVector c = coeffs_;
    for (auto& q : c) q = -q;
    return Weight(std::move(c));
}

std::string Weight::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << ",";
        os << rational_to_string(coeffs_[i]);
    }
    os << ")";
    return os.str();
}

HalfSpace halfspace_of_weight(const Weight& w) { return HalfSpace{w}; }

ConvexCone::ConvexCone(std::size_t dimension, std::vector<HalfSpace> halfspaces)
    : dim_(dimension), halfspaces_(std::move(halfspaces)) {
    if (dim_ == 0) throw Error("cone: zero-dimensional ambient space");
    for (const auto& h : halfspaces_) {
        if (h.weight.dimension() != dim_)
            throw DimensionMismatch("cone: half-space dimension mismatch");
    }
}

bool ConvexCone::contains(const RationalVector& y) const {
    if (y.size() != dim_) throw DimensionMismatch("cone: point dimension mismatch");
    for (const auto& h : halfspaces_)
        if (!h.contains(y)) return false;
    return true;
}

ConvexCone ConvexCone::pruned() const {
    std::vector<HalfSpace> kept = halfspaces_;
    for (std::size_t i = 0; i < kept.size();) {
        // i-th is redundant iff {others >= 1, h_i <= 0} is infeasible.
        std::vector<LinearConstraint> cons;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            if (j == i) continue;
            cons.push_back({kept[j].weight.coefficients(), Relation::Ge, Rational(1)});
        }
        cons.push_back({kept[i].weight.coefficients(), Relation::Le, Rational(0)});
        if (!lp_feasible(cons)) {
            kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    return ConvexCone(dim_, std::move(kept));
}

std::string ConvexCone::to_string() const {
    std::ostringstream os;
    os << "cone[dim=" << dim_;
    for (const auto& h : halfspaces_) os << " " << h.weight.to_string() << ">0";
    os << "]";
    return os.str();
}

ConvexCone intersect_cones(const std::vector<ConvexCone>& cones) {
    if (cones.empty()) throw Error("intersect_cones: empty input");
    const std::size_t dim = cones.front().dimension();
    std::vector<HalfSpace> hs;
    for (const auto& c : cones) {
        if (c.dimension() != dim)
            throw DimensionMismatch("intersect_cones: dimension mismatch");
        for (const auto& h : c.halfspaces()) hs.push_back(h);
    }
    return ConvexCone(dim, std::move(hs));
}

bool is_open_nonempty(const ConvexCone& c) {
    if (c.halfspaces().empty()) return true;
    return lp_feasible(scaled_interior_constraints(c));
}

bool contains(const ConvexCone& c, const RationalVector& y) { return c.contains(y); }

bool cone_subset(const ConvexCone& a, const ConvexCone& b) {
    if (a.dimension() != b.dimension())
        throw DimensionMismatch("cone_subset: dimension mismatch");
    if (!is_open_nonempty(a)) return true;
    for (const auto& h : b.halfspaces()) {
        std::vector<LinearConstraint> cons = scaled_interior_constraints(a);
        cons.push_back({h.weight.coefficients(), Relation::Le, Rational(0)});
        if (lp_feasible(cons)) return false;
    }
    return true;
}

bool same_membership(const ConvexCone& a, const ConvexCone& b) {
    return cone_subset(a, b) && cone_subset(b, a);
}

std::vector<RationalVector> cone_generators(const ConvexCone& c) {
    const std::size_t n = c.dimension();
    const Matrix a = halfspace_matrix(c);
    const std::size_t m = a.size();

    std::vector<RationalVector> gens;
    std::vector<RationalVector> lineality;
    if (m == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            RationalVector e(n, Rational(0));
            e[i] = 1;
            lineality.push_back(std::move(e));
        }
    } else {
        lineality = kernel_basis(a, n);
    }
    const std::size_t rho = n - lineality.size();  // rank of A

    if (rho > 0) {
        // Extreme-ray directions mod lineality: kernels of (rho-1)-row
        // subsets of full subset-rank, filtered by the remaining rows.
        std::vector<RationalVector> seen_signatures;

        auto try_subset = [&](const std::vector<std::size_t>& sel) {
            Matrix sub;
            for (auto i : sel) sub.push_back(a[i]);
            if (matrix_rank(sub) + 1 != rho) return;
            for (const auto& v : kernel_basis(sub, n)) {
                RationalVector image(m, Rational(0));
                bool nonzero = false;
                for (std::size_t i = 0; i < m; ++i) {
                    image[i] = dot(a[i], v);
                    if (image[i] != 0) nonzero = true;
                }
                if (!nonzero) continue;  // lies in the lineality space
                for (int s : {+1, -1}) {
                    bool admissible = true;
                    for (std::size_t i = 0; i < m; ++i)
                        if (s * image[i] < 0) { admissible = false; break; }
                    if (!admissible) continue;
                    RationalVector sig(m);
                    for (std::size_t i = 0; i < m; ++i) sig[i] = s * image[i];
                    sig = canonical_direction(sig);
                    if (std::find(seen_signatures.begin(), seen_signatures.end(), sig) !=
                        seen_signatures.end())
                        continue;
                    seen_signatures.push_back(sig);
                    RationalVector dir(n);
                    for (std::size_t j = 0; j < n; ++j) dir[j] = s * v[j];
                    gens.push_back(canonical_direction(dir));
                }
            }
        };

        if (rho - 1 == 0) {
            try_subset({});
        } else {
            // Enumerate (rho-1)-subsets of rows.
            std::vector<std::size_t> sel(rho - 1);
            std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                                    std::size_t depth) {
                if (depth == rho - 1) {
                    try_subset(sel);
                    return;
                }
                for (std::size_t i = start; i < m; ++i) {
                    sel[depth] = i;
                    rec(i + 1, depth + 1);
                }
            };
            rec(0, 0);
        }
    }

    for (const auto& l : lineality) {
        gens.push_back(canonical_direction(l));
        RationalVector neg(l.size());
        for (std::size_t j = 0; j < l.size(); ++j) neg[j] = -l[j];
        gens.push_back(canonical_direction(neg));
    }
    return gens;
}

ConvexCone polar_dual(const ConvexCone& c) {
    if (!is_open_nonempty(c)) throw ConeEmpty("polar_dual: empty cone");
    std::vector<HalfSpace> hs;
    for (const auto& g : cone_generators(c)) {
        bool zero = true;
        for (const auto& q : g)
            if (q != 0) { zero = false; break; }
        if (zero) continue;
        hs.push_back(HalfSpace{Weight(g)});
    }
    return ConvexCone(c.dimension(), std::move(hs));
}

ConvexCone negated_cone(const ConvexCone& c) {
    std::vector<HalfSpace> hs;
    for (const auto& h : c.halfspaces()) hs.push_back(HalfSpace{h.weight.negated()});
    return ConvexCone(c.dimension(), std::move(hs));
}

RationalVector interior_witness(const ConvexCone& c) {
    static std::mutex cache_mutex;
    static std::map<std::string, RationalVector> cache;
    const std::string key = c.to_string();
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    const std::size_t n = c.dimension();
    if (c.halfspaces().empty()) {
        // R^n itself: probe along the last coordinate axis (the dominant
        // direction of the intended wedges).
        RationalVector axis(n, Rational(0));
        axis[n - 1] = 1;
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.emplace(key, axis);
        return axis;
    }
    // Variables (y_1..y_n, u_1..u_n, t): maximize t subject to
    //   w_j . y >= t,  u_i >= |y_i|,  sum u_i = 1.
    const std::size_t nv = 2 * n + 1;
    RationalVector objective(nv, Rational(0));
    objective[nv - 1] = 1;
    std::vector<LinearConstraint> cons;
    for (const auto& h : c.halfspaces()) {
        RationalVector row(nv, Rational(0));
        for (std::size_t j = 0; j < n; ++j) row[j] = h.weight.coefficients()[j];
        row[nv - 1] = -1;
        cons.push_back({row, Relation::Ge, Rational(0)});
    }
    for (std::size_t i = 0; i < n; ++i) {
        RationalVector up(nv, Rational(0)), dn(nv, Rational(0));
        up[i] = -1;
        up[n + i] = 1;
        cons.push_back({up, Relation::Ge, Rational(0)});
        dn[i] = 1;
        dn[n + i] = 1;
        cons.push_back({dn, Relation::Ge, Rational(0)});
    }
    RationalVector sum_row(nv, Rational(0));
    for (std::size_t i = 0; i < n; ++i) sum_row[n + i] = 1;
    cons.push_back({sum_row, Relation::Eq, Rational(1)});
    // t >= 0 keeps phase 2 bounded; an open nonempty cone achieves t > 0.
    RationalVector t_row(nv, Rational(0));
    t_row[nv - 1] = 1;
    cons.push_back({t_row, Relation::Ge, Rational(0)});

    auto sol = lp_maximize(objective, cons);
    if (!sol || sol->objective <= 0)
        throw ConeEmpty("interior_witness: cone has empty interior: " + key);

    RationalVector y(sol->x.begin(), sol->x.begin() + static_cast<std::ptrdiff_t>(n));
    Rational norm = 0;
    for (const auto& q : y) norm += (q < 0 ? -q : q);
    if (norm == 0) throw ConeEmpty("interior_witness: degenerate witness: " + key);
    for (auto& q : y) q /= norm;

    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(key, y);
    return y;
}

PolarizedWeightSet polarize(const std::vector<Weight>& weights, const RationalVector& xi) {
    if (weights.empty()) throw Error("polarize: empty weight list");
    const std::size_t n = weights.front().dimension();
    if (xi.size() != n) throw DimensionMismatch("polarize: xi dimension mismatch");

    std::vector<Weight> polarized;
    polarized.reserve(weights.size());
    int sign = 1;
    std::vector<HalfSpace> hs;
    for (const auto& w : weights) {
        if (w.dimension() != n) throw DimensionMismatch("polarize: weight dimension mismatch");
        const Rational v = w(xi);
        if (v == 0)
            throw Error("polarize: weight " + w.to_string() + " vanishes on the polarization");
        const Weight wt = (v > 0) ? w : w.negated();
        if (v < 0) sign = -sign;
        hs.push_back(HalfSpace{wt});
        polarized.push_back(wt);
    }
    return PolarizedWeightSet{weights, std::move(polarized), sign,
                              ConvexCone(n, std::move(hs))};
}

nlohmann::json to_json(const Weight& w) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& q : w.coefficients()) arr.push_back(rational_to_string(q));
    return arr;
}

nlohmann::json to_json(const ConvexCone& c) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& h : c.halfspaces()) arr.push_back(to_json(h.weight));
    return arr;
}

Weight weight_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw Error("weight_from_json: expected nonempty array");
    RationalVector coeffs;
    for (const auto& e : j) coeffs.push_back(parse_rational(e.get<std::string>()));
    return Weight(std::move(coeffs));
}

ConvexCone cone_from_json(const nlohmann::json& j, std::size_t dimension_if_empty) {
    if (!j.is_array()) throw Error("cone_from_json: expected array");
    std::vector<HalfSpace> hs;
    std::size_t dim = dimension_if_empty;
    for (const auto& e : j) {
        Weight w = weight_from_json(e);
        dim = w.dimension();
        hs.push_back(HalfSpace{std::move(w)});
    }
    return ConvexCone(dim, std::move(hs));
}

}  // namespace hyperfn
