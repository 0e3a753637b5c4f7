#include "hyperfn/expr.hpp"

#include <cmath>
#include <string>

#include "hyperfn/errors.hpp"

namespace hyperfn {
namespace {

std::shared_ptr<Expr> make(ExprKind kind, std::vector<ExprPtr> kids = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->kids = std::move(kids);
    return e;
}

template <class C>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
    static Complex from_rational(const Rational& q) { return Complex(to_double(q), 0.0); }
    static Complex from_complex(Complex c) { return c; }
    static double abs_double(const Complex& c) { return std::abs(c); }
    static Complex from_long(long k) { return Complex(static_cast<double>(k), 0.0); }
};

template <>
struct ScalarTraits<HpComplex> {
    static HpComplex from_rational(const Rational& q) {
        using Real = HpComplex::value_type;
        return HpComplex(Real(numerator(q)) / Real(denominator(q)), Real(0));
    }
    static HpComplex from_complex(Complex c) { return HpComplex(c.real(), c.imag()); }
    static double abs_double(const HpComplex& c) { return abs(c).convert_to<double>(); }
    static HpComplex from_long(long k) { return HpComplex(k, 0); }
};

template <class C>
C eval_node(const Expr& e, std::span<const C> z, const EvalOptions& opts, const long* kval) {
    using T = ScalarTraits<C>;
    switch (e.kind) {
        case ExprKind::Constant:
            return T::from_complex(e.value);
        case ExprKind::Coord:
            if (e.coord_index >= z.size())
                throw DimensionMismatch("evaluate: coordinate index out of range");
            return z[e.coord_index];
        case ExprKind::IndexVar:
            if (!kval) throw Error("evaluate: index variable outside truncated product");
            return T::from_long(*kval);
        case ExprKind::Affine: {
            if (e.affine_coeffs.size() > z.size())
                throw DimensionMismatch("evaluate: affine form dimension mismatch");
            C acc = T::from_rational(e.affine_offset);
            for (std::size_t i = 0; i < e.affine_coeffs.size(); ++i) {
                if (e.affine_coeffs[i] == 0) continue;
                acc += T::from_rational(e.affine_coeffs[i]) * z[i];
            }
            return acc;
        }
        case ExprKind::Add:
            return eval_node(*e.kids[0], z, opts, kval) + eval_node(*e.kids[1], z, opts, kval);
        case ExprKind::Sub:
            return eval_node(*e.kids[0], z, opts, kval) - eval_node(*e.kids[1], z, opts, kval);
        case ExprKind::Mul:
            return eval_node(*e.kids[0], z, opts, kval) * eval_node(*e.kids[1], z, opts, kval);
        case ExprKind::Div: {
            const C num = eval_node(*e.kids[0], z, opts, kval);
            const C den = eval_node(*e.kids[1], z, opts, kval);
            const double dmag = T::abs_double(den);
            const double floor_ =
                std::max(opts.min_denominator, opts.pole_rel_tol * (1.0 + T::abs_double(num)));
            if (dmag < floor_)
                throw PoleError("evaluate: denominator within pole tolerance",
                                Complex(T::abs_double(den), 0.0));
            return num / den;
        }
        case ExprKind::Neg:
            return -eval_node(*e.kids[0], z, opts, kval);
        case ExprKind::Pow: {
            const C base = eval_node(*e.kids[0], z, opts, kval);
            int m = e.exponent;
            if (m < 0) {
                const double bmag = T::abs_double(base);
                if (bmag < std::max(opts.min_denominator, opts.pole_rel_tol))
                    throw PoleError("evaluate: negative power of near-zero base",
                                    Complex(bmag, 0.0));
            }
            C acc = T::from_long(1);
            C b = base;
            unsigned long p = static_cast<unsigned long>(m < 0 ? -static_cast<long>(m) : m);
            while (p) {
                if (p & 1u) acc *= b;
                b *= b;
                p >>= 1u;
            }
            return m < 0 ? T::from_long(1) / acc : acc;
        }
        case ExprKind::Exp: {
            using std::exp;
            return exp(eval_node(*e.kids[0], z, opts, kval));
        }
        case ExprKind::Sin: {
            using std::sin;
            return sin(eval_node(*e.kids[0], z, opts, kval));
        }
        case ExprKind::Log: {
            using std::log;
            const C arg = eval_node(*e.kids[0], z, opts, kval);
            const double amag = T::abs_double(arg);
            if (amag < std::max(opts.min_denominator, opts.pole_rel_tol))
                throw PoleError("evaluate: log at branch point", Complex(amag, 0.0));
            return log(arg);
        }
        case ExprKind::Product: {
            C acc = T::from_long(1);
            for (const auto& k : e.kids) acc *= eval_node(*k, z, opts, kval);
            return acc;
        }
        case ExprKind::TruncatedProduct: {
            C acc = T::from_long(1);
            for (long k = 1; k <= e.truncation; ++k)
                acc *= eval_node(*e.kids[0], z, opts, &k);
            return acc;
        }
    }
    throw InternalError("evaluate: corrupt expression node");
}

}  // namespace

ExprPtr Expr::constant(Complex c) {
    auto e = make(ExprKind::Constant);
    e->value = c;
    return e;
}

ExprPtr Expr::coord(std::size_t index) {
    auto e = make(ExprKind::Coord);
    e->coord_index = index;
    return e;
}

ExprPtr Expr::index_var() { return make(ExprKind::IndexVar); }

ExprPtr Expr::affine(RationalVector coeffs, Rational offset) {
    auto e = make(ExprKind::Affine);
    e->affine_coeffs = std::move(coeffs);
    e->affine_offset = std::move(offset);
    return e;
}

ExprPtr Expr::affine(const Weight& w) { return affine(w.coefficients(), Rational(0)); }

ExprPtr Expr::add(ExprPtr a, ExprPtr b) { return make(ExprKind::Add, {std::move(a), std::move(b)}); }
ExprPtr Expr::sub(ExprPtr a, ExprPtr b) { return make(ExprKind::Sub, {std::move(a), std::move(b)}); }
ExprPtr Expr::mul(ExprPtr a, ExprPtr b) { return make(ExprKind::Mul, {std::move(a), std::move(b)}); }
ExprPtr Expr::div(ExprPtr a, ExprPtr b) { return make(ExprKind::Div, {std::move(a), std::move(b)}); }
ExprPtr Expr::neg(ExprPtr a) { return make(ExprKind::Neg, {std::move(a)}); }

ExprPtr Expr::pow(ExprPtr a, int m) {
    auto e = make(ExprKind::Pow, {std::move(a)});
    e->exponent = m;
    return e;
}

ExprPtr Expr::exp(ExprPtr a) { return make(ExprKind::Exp, {std::move(a)}); }
ExprPtr Expr::sin(ExprPtr a) { return make(ExprKind::Sin, {std::move(a)}); }
ExprPtr Expr::log(ExprPtr a) { return make(ExprKind::Log, {std::move(a)}); }

ExprPtr Expr::product(std::vector<ExprPtr> factors) {
    return make(ExprKind::Product, std::move(factors));
}

ExprPtr Expr::truncated_product(ExprPtr factor, long order) {
    if (order < 1) throw Error("truncated_product: order must be >= 1");
    auto e = make(ExprKind::TruncatedProduct, {std::move(factor)});
    e->truncation = order;
    return e;
}

Complex evaluate(const Expr& e, std::span<const Complex> z, const EvalOptions& opts) {
    const Complex out = eval_node<Complex>(e, z, opts, nullptr);
    if (!std::isfinite(out.real()) || !std::isfinite(out.imag()))
        throw InternalError("evaluate: non-finite result");
    return out;
}

HpComplex evaluate_hp(const Expr& e, std::span<const HpComplex> z, const EvalOptions& opts) {
    return eval_node<HpComplex>(e, z, opts, nullptr);
}

namespace {

const char* kCoordPrefix = "z";

nlohmann::json op_node(const char* name, const Expr& e) {
    nlohmann::json arr = nlohmann::json::array();
    arr.push_back(name);
    for (const auto& k : e.kids) arr.push_back(expr_to_json(*k));
    return arr;
}

}  // namespace

nlohmann::json expr_to_json(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Constant:
            if (e.value == Complex(0.0, 1.0)) return "i";
            if (e.value.imag() == 0.0) return e.value.real();
            return nlohmann::json::array({"complex", e.value.real(), e.value.imag()});
        case ExprKind::Coord:
            return kCoordPrefix + std::to_string(e.coord_index + 1);
        case ExprKind::IndexVar:
            return "k";
        case ExprKind::Affine: {
            nlohmann::json coeffs = nlohmann::json::array();
            for (const auto& q : e.affine_coeffs) coeffs.push_back(rational_to_string(q));
            return nlohmann::json::array(
                {"affine", coeffs, rational_to_string(e.affine_offset)});
        }
        case ExprKind::Add: return op_node("add", e);
        case ExprKind::Sub: return op_node("sub", e);
        case ExprKind::Mul: return op_node("mul", e);
        case ExprKind::Div: return op_node("div", e);
        case ExprKind::Neg: return op_node("neg", e);
        case ExprKind::Pow:
            return nlohmann::json::array({"pow", expr_to_json(*e.kids[0]), e.exponent});
        case ExprKind::Exp: return op_node("exp", e);
        case ExprKind::Sin: return op_node("sin", e);
        case ExprKind::Log: return op_node("log", e);
        case ExprKind::Product: return op_node("prod", e);
        case ExprKind::TruncatedProduct:
            return nlohmann::json::array(
                {"truncprod", e.truncation, expr_to_json(*e.kids[0])});
    }
    throw InternalError("expr_to_json: corrupt node");
}

ExprPtr expr_from_json(const nlohmann::json& j) {
    if (j.is_number()) return Expr::real(j.get<double>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "i") return Expr::imaginary_unit();
        if (s == "k") return Expr::index_var();
        if (s.size() >= 2 && s[0] == 'z') {
            const long idx = std::stol(s.substr(1));
            if (idx < 1) throw Error("expr_from_json: bad coordinate " + s);
            return Expr::coord(static_cast<std::size_t>(idx - 1));
        }
        throw Error("expr_from_json: unknown atom " + s);
    }
    if (!j.is_array() || j.empty() || !j[0].is_string())
        throw Error("expr_from_json: expected operator array");
    const std::string op = j[0].get<std::string>();
    auto kid = [&](std::size_t i) { return expr_from_json(j.at(i)); };
    if (op == "complex") return Expr::constant(Complex(j.at(1).get<double>(), j.at(2).get<double>()));
    if (op == "affine") {
        RationalVector coeffs;
        for (const auto& c : j.at(1)) coeffs.push_back(parse_rational(c.get<std::string>()));
        return Expr::affine(std::move(coeffs), parse_rational(j.at(2).get<std::string>()));
    }
    if (op == "add") return Expr::add(kid(1), kid(2));
    if (op == "sub") return Expr::sub(kid(1), kid(2));
    if (op == "mul") return Expr::mul(kid(1), kid(2));
    if (op == "div") return Expr::div(kid(1), kid(2));
    if (op == "neg") return Expr::neg(kid(1));
    if (op == "pow") return Expr::pow(kid(1), j.at(2).get<int>());
    if (op == "exp") return Expr::exp(kid(1));
    if (op == "sin") return Expr::sin(kid(1));
    if (op == "log") return Expr::log(kid(1));
    if (op == "prod") {
        std::vector<ExprPtr> kids;
        for (std::size_t i = 1; i < j.size(); ++i) kids.push_back(kid(i));
        return Expr::product(std::move(kids));
    }
    if (op == "truncprod")
        return Expr::truncated_product(expr_from_json(j.at(2)), j.at(1).get<long>());
    throw Error("expr_from_json: unknown operator " + op);
}

std::optional<std::vector<Complex>> affine_profile(const Expr& e, std::size_t dim) {
    using Profile = std::vector<Complex>;
    auto zero = [&] { return Profile(dim + 1, Complex(0.0, 0.0)); };
    switch (e.kind) {
        case ExprKind::Constant: {
            auto p = zero();
            p[dim] = e.value;
            return p;
        }
        case ExprKind::Coord: {
            if (e.coord_index >= dim) return std::nullopt;
            auto p = zero();
            p[e.coord_index] = 1.0;
            return p;
        }
        case ExprKind::Affine: {
            if (e.affine_coeffs.size() > dim) return std::nullopt;
            auto p = zero();
            for (std::size_t i = 0; i < e.affine_coeffs.size(); ++i)
                p[i] = to_double(e.affine_coeffs[i]);
            p[dim] = to_double(e.affine_offset);
            return p;
        }
        case ExprKind::Add:
        case ExprKind::Sub: {
            auto a = affine_profile(*e.kids[0], dim);
            auto b = affine_profile(*e.kids[1], dim);
            if (!a || !b) return std::nullopt;
            for (std::size_t i = 0; i <= dim; ++i)
                (*a)[i] = (e.kind == ExprKind::Add) ? (*a)[i] + (*b)[i] : (*a)[i] - (*b)[i];
            return a;
        }
        case ExprKind::Neg: {
            auto a = affine_profile(*e.kids[0], dim);
            if (!a) return std::nullopt;
            for (auto& c : *a) c = -c;
            return a;
        }
        case ExprKind::Mul: {
            // constant * affine (either order)
            for (int side : {0, 1}) {
                if (e.kids[side]->kind == ExprKind::Constant) {
                    auto a = affine_profile(*e.kids[1 - side], dim);
                    if (!a) return std::nullopt;
                    for (auto& c : *a) c *= e.kids[side]->value;
                    return a;
                }
            }
            return std::nullopt;
        }
        case ExprKind::Div: {
            if (e.kids[1]->kind != ExprKind::Constant || e.kids[1]->value == Complex(0.0, 0.0))
                return std::nullopt;
            auto a = affine_profile(*e.kids[0], dim);
            if (!a) return std::nullopt;
            for (auto& c : *a) c /= e.kids[1]->value;
            return a;
        }
        default:
            return std::nullopt;
    }
}

bool is_rational_expr(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Constant:
        case ExprKind::Coord:
        case ExprKind::IndexVar:
        case ExprKind::Affine:
            return true;
        case ExprKind::Add:
        case ExprKind::Sub:
        case ExprKind::Mul:
        case ExprKind::Div:
        case ExprKind::Neg:
        case ExprKind::Pow:
        case ExprKind::Product:
            for (const auto& k : e.kids)
                if (!is_rational_expr(*k)) return false;
            return true;
        default:
            return false;
    }
}

void collect_factors(const ExprPtr& e, std::vector<ExprPtr>& out) {
    if (e->kind == ExprKind::Mul || e->kind == ExprKind::Product) {
        for (const auto& k : e->kids) collect_factors(k, out);
        return;
    }
    out.push_back(e);
}

ExprPtr truncated_euler_product(long n, long order) {
    // factor(k) = 1 - (2 (n z2 + z1) / (k z2))^2
    ExprPtr weight_part = Expr::affine(RationalVector{Rational(1), Rational(n)});
    ExprPtr numer = Expr::mul(Expr::real(2.0), weight_part);
    ExprPtr denom = Expr::mul(Expr::index_var(), Expr::coord(1));
    ExprPtr ratio = Expr::div(numer, denom);
    ExprPtr factor = Expr::sub(Expr::real(1.0), Expr::pow(ratio, 2));
    return Expr::truncated_product(factor, order);
}

}  // namespace hyperfn
