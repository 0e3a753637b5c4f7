#ifndef HYPERFN_EXPR_HPP
#define HYPERFN_EXPR_HPP

#include <boost/multiprecision/cpp_complex.hpp>
#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "hyperfn/cone.hpp"
#include "hyperfn/rational.hpp"

namespace hyperfn {

using Complex = std::complex<double>;

// Closed expression grammar for the defining holomorphic functions: rational
// operations, exp, sin, principal-branch log, integer powers, finite and
// truncated products, and exact-rational affine forms.  The grammar is closed
// so pole probing and growth classification can proceed by structural
// induction.
enum class ExprKind {
    Constant,
    Coord,
    IndexVar,  // the running index inside a TruncatedProduct factor
    Affine,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
    Exp,
    Sin,
    Log,
    Product,
    TruncatedProduct,
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
  public:
    ExprKind kind;
    Complex value{0.0, 0.0};         // Constant
    std::size_t coord_index = 0;     // Coord
    RationalVector affine_coeffs;    // Affine
    Rational affine_offset = 0;      // Affine
    int exponent = 0;                // Pow
    long truncation = 0;             // TruncatedProduct
    std::vector<ExprPtr> kids;

    static ExprPtr constant(Complex c);
    static ExprPtr real(double x) { return constant(Complex{x, 0.0}); }
    static ExprPtr imaginary_unit() { return constant(Complex{0.0, 1.0}); }
    static ExprPtr coord(std::size_t index);
    static ExprPtr index_var();
    static ExprPtr affine(RationalVector coeffs, Rational offset = 0);
    static ExprPtr affine(const Weight& w);
    static ExprPtr add(ExprPtr a, ExprPtr b);
    static ExprPtr sub(ExprPtr a, ExprPtr b);
    static ExprPtr mul(ExprPtr a, ExprPtr b);
    static ExprPtr div(ExprPtr a, ExprPtr b);
    static ExprPtr neg(ExprPtr a);
    static ExprPtr pow(ExprPtr a, int m);
    static ExprPtr exp(ExprPtr a);
    static ExprPtr sin(ExprPtr a);
    static ExprPtr log(ExprPtr a);
    static ExprPtr product(std::vector<ExprPtr> factors);
    static ExprPtr truncated_product(ExprPtr factor, long order);
};

struct EvalOptions {
    // A division (or log argument) counts as a pole hit when
    // |den| < max(min_denominator, pole_rel_tol * (1 + |num|)).
    double pole_rel_tol = 1e-12;
    double min_denominator = 0.0;
};

Complex evaluate(const Expr& e, std::span<const Complex> z, const EvalOptions& opts = {});

inline Complex evaluate(const ExprPtr& e, std::span<const Complex> z,
                        const EvalOptions& opts = {}) {
    return evaluate(*e, z, opts);
}

inline Complex evaluate1(const ExprPtr& e, Complex z, const EvalOptions& opts = {}) {
    return evaluate(*e, std::span<const Complex>(&z, 1), opts);
}

// High-precision path (~50 significant digits) for oracle cross-checks.
using HpComplex = boost::multiprecision::cpp_complex_50;
HpComplex evaluate_hp(const Expr& e, std::span<const HpComplex> z,
                      const EvalOptions& opts = {});

// JSON s-expression form, e.g. ["div", ["exp", ["mul", "i", "z1"]], "z1"].
// Round-trips preserve double-precision evaluation bit for bit.
nlohmann::json expr_to_json(const Expr& e);
ExprPtr expr_from_json(const nlohmann::json& j);

// Affine recognition through constant multiples/sums; returns n coefficients
// plus the constant term at index n, or nullopt.
std::optional<std::vector<Complex>> affine_profile(const Expr& e, std::size_t dim);

// True when the expression uses no transcendental node.
bool is_rational_expr(const Expr& e);

// Flattens nested Mul/Product into a factor list.
void collect_factors(const ExprPtr& e, std::vector<ExprPtr>& out);

// prod_{k=1..K} [1 - (2(n z2 + z1)/(k z2))^2], the regularized weight
// product at the n-th fixed point (coordinates z1, z2).
ExprPtr truncated_euler_product(long n, long order);

}  // namespace hyperfn

#endif
