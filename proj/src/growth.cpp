#include "hyperfn/growth.hpp"

#include <cmath>
#include <functional>

namespace hyperfn {
namespace {

constexpr double kRateSlack = 1e-9;

// 1/(c0 + c1*e^{L(z)}) with c0, c1 > 0 real and L affine: returns Re-part
// coefficients of L.  This is the logistic building block of the holomorphic
// partitions of unity.
std::optional<std::vector<double>> logistic_exponent(const Expr& e, std::size_t dim) {
    if (e.kind != ExprKind::Div) return std::nullopt;
    const Expr& num = *e.kids[0];
    if (!(num.kind == ExprKind::Constant && num.value.imag() == 0.0 && num.value.real() > 0.0))
        return std::nullopt;
    const Expr& den = *e.kids[1];
    if (den.kind != ExprKind::Add) return std::nullopt;
    const Expr* c = nullptr;
    const Expr* g = nullptr;
    for (int side : {0, 1}) {
        if (den.kids[side]->kind == ExprKind::Constant) {
            c = den.kids[side].get();
            g = den.kids[1 - side].get();
        }
    }
    if (!c || !g) return std::nullopt;
    if (c->value.imag() != 0.0 || c->value.real() <= 0.0) return std::nullopt;
    const Expr* exp_node = g;
    if (g->kind == ExprKind::Mul) {
        // positive constant multiples of the exponential keep the bound
        for (int side : {0, 1}) {
            if (g->kids[side]->kind == ExprKind::Constant) {
                const Complex v = g->kids[side]->value;
                if (v.imag() != 0.0 || v.real() <= 0.0) return std::nullopt;
                exp_node = g->kids[1 - side].get();
            }
        }
    }
    if (exp_node->kind != ExprKind::Exp) return std::nullopt;
    auto prof = affine_profile(*exp_node->kids[0], dim);
    if (!prof) return std::nullopt;
    std::vector<double> re(dim);
    for (std::size_t i = 0; i < dim; ++i) re[i] = (*prof)[i].real();
    return re;
}

std::optional<double> rate(const Expr& e, std::span<const double> d, std::size_t dim,
                           bool credit_logistic) {
    switch (e.kind) {
        case ExprKind::Constant:
        case ExprKind::Coord:
        case ExprKind::IndexVar:
        case ExprKind::Affine:
            return 0.0;
        case ExprKind::Add:
        case ExprKind::Sub: {
            auto a = rate(*e.kids[0], d, dim, credit_logistic);
            auto b = rate(*e.kids[1], d, dim, credit_logistic);
            if (!a || !b) return std::nullopt;
            return std::max(*a, *b);
        }
        case ExprKind::Neg:
            return rate(*e.kids[0], d, dim, credit_logistic);
        case ExprKind::Mul:
        case ExprKind::Product: {
            double s = 0.0;
            for (const auto& k : e.kids) {
                if (auto lg = logistic_exponent(*k, dim)) {
                    if (credit_logistic) {
                        double proj = 0.0;
                        for (std::size_t i = 0; i < dim; ++i) proj += (*lg)[i] * d[i];
                        s += -std::max(0.0, proj);
                    }
                    continue;
                }
                auto r = rate(*k, d, dim, credit_logistic);
                if (!r) return std::nullopt;
                s += *r;
            }
            return s;
        }
        case ExprKind::Div: {
            if (auto lg = logistic_exponent(e, dim)) {
                if (!credit_logistic) return 0.0;
                double proj = 0.0;
                for (std::size_t i = 0; i < dim; ++i) proj += (*lg)[i] * d[i];
                return -std::max(0.0, proj);
            }
            auto a = rate(*e.kids[0], d, dim, credit_logistic);
            if (!a) return std::nullopt;
            // Denominator contributions: rational factors are rate-neutral;
            // (c0 + c1 e^L) factors grow at rate max(0, <Re L, d>).
            std::vector<ExprPtr> factors;
            collect_factors(e.kids[1], factors);
            double den_gain = 0.0;
            for (const auto& f : factors) {
                if (is_rational_expr(*f)) continue;
                // Lift 1/(1+e^L) recognition to the bare (1+e^L) factor.
                ExprPtr wrapped = Expr::div(Expr::real(1.0), f);
                if (auto lg = logistic_exponent(*wrapped, dim)) {
                    double proj = 0.0;
                    for (std::size_t i = 0; i < dim; ++i) proj += (*lg)[i] * d[i];
                    den_gain += std::max(0.0, proj);
                    continue;
                }
                return std::nullopt;
            }
            return *a - (credit_logistic ? den_gain : 0.0);
        }
        case ExprKind::Pow: {
            auto a = rate(*e.kids[0], d, dim, credit_logistic);
            if (!a) return std::nullopt;
            if (e.exponent >= 0) return *a * e.exponent;
            if (is_rational_expr(*e.kids[0])) return 0.0;
            return std::nullopt;
        }
        case ExprKind::Exp: {
            auto prof = affine_profile(*e.kids[0], dim);
            if (!prof) return std::nullopt;
            double s = 0.0;
            for (std::size_t i = 0; i < dim; ++i) s += (*prof)[i].real() * d[i];
            return s;
        }
        case ExprKind::Sin: {
            auto prof = affine_profile(*e.kids[0], dim);
            if (!prof) return std::nullopt;
            double s = 0.0;
            for (std::size_t i = 0; i < dim; ++i) s += (*prof)[i].imag() * d[i];
            return std::abs(s);
        }
        case ExprKind::Log: {
            auto a = rate(*e.kids[0], d, dim, credit_logistic);
            if (!a) return std::nullopt;
            return 0.0;  // logarithmic growth is rate-neutral
        }
        case ExprKind::TruncatedProduct:
            if (is_rational_expr(*e.kids[0])) return 0.0;
            return std::nullopt;
    }
    return std::nullopt;
}

void corner_directions(std::size_t dim, std::vector<std::vector<double>>& out) {
    out.clear();
    const std::size_t count = std::size_t{1} << dim;
    for (std::size_t mask = 0; mask < count; ++mask) {
        std::vector<double> d(dim);
        for (std::size_t i = 0; i < dim; ++i) d[i] = (mask >> i) & 1 ? 1.0 : -1.0;
        out.push_back(std::move(d));
    }
}

// ratio-of-affine argument (z1/z2 up to constants), the shape of the
// sin denominators in the loop-space Euler classes.
bool is_affine_ratio(const Expr& e, std::size_t dim) {
    if (e.kind == ExprKind::Mul) {
        for (int side : {0, 1})
            if (e.kids[side]->kind == ExprKind::Constant)
                return is_affine_ratio(*e.kids[1 - side], dim);
        return false;
    }
    if (e.kind != ExprKind::Div) return false;
    return affine_profile(*e.kids[0], dim).has_value() &&
           affine_profile(*e.kids[1], dim).has_value();
}

// Strips a sin-of-affine-ratio factor from the denominator of e, if present,
// returning the remaining numerator part.  Handles Div(num, sin(r)) and
// Div(num, Mul(..., sin(r), ...)).
const Expr* csc_ratio_numerator(const Expr& e, std::size_t dim) {
    if (e.kind != ExprKind::Div) return nullptr;
    std::vector<ExprPtr> factors;
    collect_factors(e.kids[1], factors);
    bool found = false;
    for (const auto& f : factors) {
        if (f->kind == ExprKind::Sin && is_affine_ratio(*f->kids[0], dim)) {
            found = true;
        } else if (!is_rational_expr(*f)) {
            return nullptr;
        }
    }
    return found ? e.kids[0].get() : nullptr;
}

bool numerator_slowly_increasing(const Expr& e, std::size_t dim) {
    std::vector<std::vector<double>> corners;
    corner_directions(dim, corners);
    for (const auto& d : corners) {
        auto r = rate(e, d, dim, /*credit_logistic=*/false);
        if (!r || *r > kRateSlack) return false;
    }
    return true;
}

// SI test for the csc-of-ratio family, valid when the carrying cone keeps
// the ratio's imaginary part away from the real polar locus.
bool csc_ratio_slowly_increasing(const Expr& e, const ConvexCone& cone) {
    const std::size_t dim = cone.dimension();
    if (dim != 2) return false;
    if (const Expr* num = csc_ratio_numerator(e, dim))
        if (numerator_slowly_increasing(*num, dim)) {
            ConvexCone safe(2, {HalfSpace{Weight({Rational(2), Rational(1)})},
                                HalfSpace{Weight({Rational(-2), Rational(1)})}});
            return cone_subset(cone, safe);
        }
    if (e.kind == ExprKind::Add || e.kind == ExprKind::Sub) {
        return csc_ratio_slowly_increasing(*e.kids[0], cone) &&
               csc_ratio_slowly_increasing(*e.kids[1], cone);
    }
    if (e.kind == ExprKind::Neg) return csc_ratio_slowly_increasing(*e.kids[0], cone);
    if (e.kind == ExprKind::Mul) {
        // bounded phase times csc form (either order)
        for (int side : {0, 1}) {
            if (numerator_slowly_increasing(*e.kids[side], cone.dimension()) &&
                csc_ratio_slowly_increasing(*e.kids[1 - side], cone))
                return true;
        }
    }
    return false;
}

// Decay cone from the logistic factors of a product: intersection of the
// half-spaces where some factor decays.  Coefficient vectors must be
// proportional to a rational direction (pi-scaled coordinates qualify).
std::optional<ConvexCone> logistic_decay_cone(const Expr& e, std::size_t dim) {
    std::vector<ExprPtr> factors;
    collect_factors(std::make_shared<Expr>(e), factors);
    std::vector<HalfSpace> hs;
    for (const auto& f : factors) {
        auto lg = logistic_exponent(*f, dim);
        if (!lg) continue;
        // Rationalize the direction: single-coordinate or integer-ratio rows.
        RationalVector w(dim, Rational(0));
        double scale = 0.0;
        for (double c : *lg)
            if (std::abs(c) > 1e-14) { scale = std::abs(c); break; }
        if (scale == 0.0) continue;
        bool ok = true;
        for (std::size_t i = 0; i < dim; ++i) {
            const double ratio = (*lg)[i] / scale;
            const double rounded = std::round(ratio * 840.0) / 840.0;  // small denominators
            if (std::abs(ratio - rounded) > 1e-12) { ok = false; break; }
            w[i] = Rational(static_cast<long>(std::llround(rounded * 840.0)), 840);
        }
        if (!ok) return std::nullopt;
        hs.push_back(HalfSpace{Weight(std::move(w))});
    }
    if (hs.empty()) return std::nullopt;
    return ConvexCone(dim, std::move(hs));
}

}  // namespace

std::optional<double> growth_rate(const Expr& e, std::span<const double> d, std::size_t dim,
                                  bool credit_logistic_decay) {
    return rate(e, d, dim, credit_logistic_decay);
}

GrowthClass classify_growth(const Expr& e, const ConvexCone& cone) {
    const std::size_t dim = cone.dimension();

    // The cutoff rule first: a logistic factor marks the term as localized,
    // and the decay cone is the sharper information downstream consumers
    // (the Fourier transform) need.
    if (auto delta = logistic_decay_cone(e, dim)) {
        if (is_open_nonempty(*delta)) {
            bool decays = true;
            for (const auto& g : cone_generators(*delta)) {
                auto gd = to_double_vector(g);
                double norm = 0.0;
                for (double v : gd) norm += std::abs(v);
                if (norm == 0.0) continue;
                for (double& v : gd) v /= norm;
                auto r = rate(e, gd, dim, /*credit_logistic=*/true);
                if (!r || *r >= -kRateSlack) { decays = false; break; }
            }
            if (decays) return GrowthClass::exponentially_decreasing_on(*delta);
        }
    }

    if (csc_ratio_slowly_increasing(e, cone)) return GrowthClass::slowly_increasing();

    std::vector<std::vector<double>> corners;
    corner_directions(dim, corners);
    bool si = true;
    for (const auto& d : corners) {
        auto r = rate(e, d, dim, /*credit_logistic=*/false);
        if (!r || *r > kRateSlack) { si = false; break; }
    }
    if (si) return GrowthClass::slowly_increasing();
    return GrowthClass::unclassified();
}

bool decays_everywhere(const Expr& e, std::size_t dim) {
    std::vector<std::vector<double>> corners;
    corner_directions(dim, corners);
    for (const auto& d : corners) {
        auto r = rate(e, d, dim, /*credit_logistic=*/true);
        if (!r || *r >= -kRateSlack) return false;
    }
    return true;
}

}  // namespace hyperfn
