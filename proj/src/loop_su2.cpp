#include "hyperfn/loop_su2.hpp"

#include <cmath>

#include "hyperfn/errors.hpp"

namespace hyperfn {
namespace loop_su2 {
namespace {

constexpr double kModeIntTol = 1e-9;

// (z1 + n z2) / z2
ExprPtr shifted_ratio(long n) {
    return Expr::div(Expr::affine(RationalVector{Rational(1), Rational(n)}), Expr::coord(1));
}

ExprPtr two_pi(ExprPtr inner) { return Expr::mul(Expr::real(2.0 * M_PI), std::move(inner)); }

// 2 pi (n + z1/z2) / sin(2 pi r), r per the requested form.
ExprPtr euler_reciprocal_expr(long n, EulerForm form) {
    ExprPtr numer = two_pi(shifted_ratio(n));
    ExprPtr sin_arg = two_pi(form == EulerForm::Display ? shifted_ratio(0) : shifted_ratio(n));
    return Expr::div(std::move(numer), Expr::sin(std::move(sin_arg)));
}

// e^{i (n z1 + n^2/2 z2)}
ExprPtr loop_phase(long n) {
    return Expr::exp(Expr::mul(
        Expr::imaginary_unit(),
        Expr::affine(RationalVector{Rational(n), Rational(n) * Rational(n) / 2})));
}

struct Mat2 {
    Complex a{0, 0}, b{0, 0}, c{0, 0}, d{0, 0};

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 scaled(Complex s) const { return {s * a, s * b, s * c, s * d}; }
    double norm() const {
        return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
    }
};

Mat2 loop_matrix(const FixedLoop& l, double t) {
    const Complex al = l.alpha(t), be = l.beta(t);
    return {al, -std::conj(be), be, std::conj(al)};
}

Mat2 loop_matrix_dot(const FixedLoop& l, double t) {
    const Complex ad = l.alpha_dot(t), bd = l.beta_dot(t);
    return {ad, -std::conj(bd), bd, std::conj(ad)};
}

}  // namespace

std::vector<Weight> isotropy_weights(long n, long k_max) {
    if (k_max < 1) throw Error("isotropy_weights: k_max must be >= 1");
    std::vector<Weight> out;
    out.reserve(4 * static_cast<std::size_t>(k_max));
    for (long k = 1; k <= k_max; ++k) {
        out.push_back(Weight({Rational(0), Rational(k)}));
        out.push_back(Weight({Rational(0), Rational(k)}));
        out.push_back(Weight({Rational(2), Rational(k + 2 * n)}));
        out.push_back(Weight({Rational(-2), Rational(k - 2 * n)}));
    }
    return out;
}

RationalVector default_polarization() { return {Rational(1, 4), Rational(1)}; }

ConvexCone cone_gamma0() {
    return ConvexCone(2, {HalfSpace{Weight({Rational(2), Rational(1)})},
                          HalfSpace{Weight({Rational(-2), Rational(1)})}});
}

ConvexCone cone_gamma_nonzero() {
    auto hs = cone_gamma0().halfspaces();
    hs.push_back(HalfSpace{Weight({Rational(1), Rational(0)})});
    return ConvexCone(2, std::move(hs));
}

ConvexCone polarization_cone(long n) {
    // Level cones shrink as k grows toward the k = 2|n|+1 window, so the
    // truncated intersection is exact.
    const long k_cut = 2 * std::labs(n) + 1;
    const PolarizedWeightSet pol = polarize(isotropy_weights(n, k_cut), default_polarization());
    return pol.cone.pruned();
}

int fixed_point_sign(long n) { return n >= 0 ? +1 : -1; }

BoundaryValueTerm regularized_euler(long n, EulerForm form) {
    ExprPtr expr = euler_reciprocal_expr(n, form);
    ConvexCone cone = polarization_cone(n);
    GrowthClass growth = classify_growth(*expr, cone);
    return BoundaryValueTerm(std::move(expr), std::move(cone), std::move(growth),
                             "euler[n=" + std::to_string(n) + "]");
}

Hyperfunction picken_omega_su2(long truncation, EulerForm form) {
    if (truncation < 0) throw Error("picken_omega_su2: truncation must be >= 0");
    const Complex scale{-1.0 / (4.0 * M_PI * M_PI), 0.0};  // (2 pi i)^{-2}

    std::vector<BoundaryValueTerm> terms;
    if (truncation >= 1) {
        ExprPtr sum;
        for (long n = -truncation; n <= truncation; ++n) {
            if (n == 0) continue;
            ExprPtr summand = Expr::mul(loop_phase(n), euler_reciprocal_expr(n, form));
            if (n < 0) summand = Expr::neg(std::move(summand));
            sum = sum ? Expr::add(std::move(sum), std::move(summand)) : std::move(summand);
        }
        ExprPtr expr = Expr::mul(Expr::constant(scale), std::move(sum));
        ConvexCone cone = cone_gamma_nonzero();
        GrowthClass growth = classify_growth(*expr, cone);
        terms.emplace_back(std::move(expr), std::move(cone), std::move(growth),
                           "picken_su2[n!=0]");
    }
    ExprPtr zero_term = Expr::mul(Expr::constant(scale), euler_reciprocal_expr(0, form));
    ConvexCone zero_cone = cone_gamma0();
    GrowthClass zero_growth = classify_growth(*zero_term, zero_cone);
    terms.emplace_back(std::move(zero_term), std::move(zero_cone), std::move(zero_growth),
                       "picken_su2[n=0]");
    return Hyperfunction(2, std::move(terms));
}

long certified_truncation(double tol, std::span<const double> y, double ratio_mag,
                          double csc_mag) {
    if (y.size() != 2 || y[1] <= 0.0) throw Error("certified_truncation: bad wedge point");
    const double y1 = std::max(0.0, y[0]);
    const double y2 = y[1];
    auto tail = [&](long N) {
        double s = 0.0;
        for (long n = N + 1; n <= N + 20000; ++n) {
            const double mag = (static_cast<double>(n) + ratio_mag) * csc_mag / (2.0 * M_PI) *
                               std::exp(n * y1 - 0.5 * n * n * y2);
            s += 2.0 * mag;  // both signs of n
            if (mag < 1e-300) break;
        }
        return s;
    };
    for (long N = 1; N <= 100000; ++N)
        if (tail(N) < tol) return N;
    throw Error("certified_truncation: no admissible truncation below 100000");
}

ExprPtr dh_integrand_expr(long n, std::array<Complex, 2> zeta, const PartitionPiece& piece) {
    const Complex minus_i{0.0, -1.0};
    const double half_n2 = 0.5 * static_cast<double>(n) * static_cast<double>(n);
    ExprPtr arg = Expr::add(
        Expr::mul(Expr::constant(minus_i * (zeta[0] - static_cast<double>(n))), Expr::coord(0)),
        Expr::mul(Expr::constant(minus_i * (zeta[1] - half_n2)), Expr::coord(1)));
    ExprPtr kernel = Expr::exp(std::move(arg));
    return Expr::mul(std::move(kernel),
                     Expr::mul(euler_reciprocal_expr(n, EulerForm::Display), piece.chi));
}

Complex dh_integrand(long n, std::array<Complex, 2> zeta, std::span<const Complex> z,
                     const PartitionPiece& piece) {
    return evaluate(*dh_integrand_expr(n, zeta, piece), z);
}

Levi classify_subtorus(long n, long m) {
    if (m == 0) throw TrivialCase("classify_subtorus: m = 0 generates the trivial case");
    return (2 * n) % m == 0 ? Levi::IsG : Levi::IsT;
}

Complex FixedLoop::alpha(double t) const {
    Complex s{0.0, 0.0};
    for (const auto& [k, c] : alpha_modes) s += c * std::polar(1.0, -k * t);
    return s;
}

Complex FixedLoop::beta(double t) const {
    Complex s{0.0, 0.0};
    for (const auto& [k, c] : beta_modes) s += c * std::polar(1.0, -k * t);
    return s;
}

Complex FixedLoop::alpha_dot(double t) const {
    Complex s{0.0, 0.0};
    for (const auto& [k, c] : alpha_modes)
        s += c * Complex(0.0, -static_cast<double>(k)) * std::polar(1.0, -k * t);
    return s;
}

Complex FixedLoop::beta_dot(double t) const {
    Complex s{0.0, 0.0};
    for (const auto& [k, c] : beta_modes)
        s += c * Complex(0.0, -static_cast<double>(k)) * std::polar(1.0, -k * t);
    return s;
}

FixedLoop solve_fixed_loop(long n, long m, double A, Complex beta0_prime) {
    if (m == 0) throw TrivialCase("solve_fixed_loop: m = 0 generates the trivial case");
    FixedLoop loop;
    loop.n = n;
    loop.m = m;
    loop.initial_alpha_rate = A;
    loop.beta0_prime = beta0_prime;

    const double nm = static_cast<double>(n) / static_cast<double>(m);
    if (std::abs(beta0_prime) == 0.0) {
        // Diagonal loops alpha = e^{iAt}: periodic only for integer A.
        const double k0 = -A;
        if (std::abs(k0 - std::round(k0)) > kModeIntTol)
            throw NoPeriodicSolution(
                "solve_fixed_loop: beta'(0)=0 and alpha'(0) is not an integer mode");
        loop.alpha_modes[std::lround(k0)] = Complex(1.0, 0.0);
        return loop;
    }

    const double C = std::sqrt((A + nm) * (A + nm) + std::norm(beta0_prime));
    const double k_hi = nm + C;
    const double k_lo = nm - C;
    if (std::abs(k_hi - std::round(k_hi)) > kModeIntTol ||
        std::abs(k_lo - std::round(k_lo)) > kModeIntTol)
        throw NoPeriodicSolution(
            "solve_fixed_loop: mode criterion admits no integer pair; the fixed set for "
            "these parameters contains only loops with beta = 0");
    const long k1 = std::lround(k_hi);
    const long k2 = std::lround(k_lo);

    loop.alpha_modes[k1] = Complex(-(A + static_cast<double>(k2)) / (2.0 * C), 0.0);
    loop.alpha_modes[k2] = Complex((A + static_cast<double>(k1)) / (2.0 * C), 0.0);
    const Complex b = beta0_prime / Complex(0.0, 2.0 * C);
    loop.beta_modes[-k1] = b;
    loop.beta_modes[-k2] = -b;
    return loop;
}

FixedLoop solve_fixed_loop_from_modes(long n, long m, long k_high, long k_low) {
    if (m == 0) throw TrivialCase("solve_fixed_loop_from_modes: m = 0");
    if (k_high < k_low) std::swap(k_high, k_low);
    if (2 * n != m * (k_high + k_low))
        throw Error("solve_fixed_loop_from_modes: modes inconsistent with n/m");
    const double nm = static_cast<double>(n) / static_cast<double>(m);
    if (k_high == k_low) return solve_fixed_loop(n, m, -nm, Complex(0.0, 0.0));
    const double C = 0.5 * static_cast<double>(k_high - k_low);
    return solve_fixed_loop(n, m, -nm, Complex(C, 0.0));
}

LoopReport verify_fixed_loop(const FixedLoop& loop, int samples) {
    LoopReport rep;
    const Complex a0 = loop.alpha_dot(0.0);
    const Complex b0 = loop.beta_dot(0.0);
    const double nm = static_cast<double>(loop.n) / static_cast<double>(loop.m);
    const Mat2 gamma_dot0 = loop_matrix_dot(loop, 0.0);
    const Complex in{0.0, static_cast<double>(loop.n)};

    for (int s = 0; s < samples; ++s) {
        const double t = 2.0 * M_PI * s / samples;
        const Complex al = loop.alpha(t), be = loop.beta(t);
        const Complex ad = loop.alpha_dot(t), bd = loop.beta_dot(t);

        const double r1 = std::abs(ad - (al * a0 - std::conj(be) * b0));
        const double r2 =
            std::abs(bd - (b0 * std::conj(al) + (Complex(0.0, 2.0 * nm) + a0) * be));
        rep.ode_residual = std::max(rep.ode_residual, std::max(r1, r2));

        rep.unitarity_defect =
            std::max(rep.unitarity_defect, std::abs(std::norm(al) + std::norm(be) - 1.0));

        const Mat2 g = loop_matrix(loop, t);
        const Mat2 gd = loop_matrix_dot(loop, t);
        const Mat2 lambda{in, 0.0, 0.0, -in};
        const Mat2 r = (gd - g * gamma_dot0).scaled(static_cast<double>(loop.m)) +
                       (lambda * g - g * lambda);
        rep.hvf_residual = std::max(rep.hvf_residual, r.norm());
    }
    rep.pass = rep.ode_residual < 1e-8 && rep.unitarity_defect < 1e-8 &&
               rep.hvf_residual < 1e-8;
    return rep;
}

nlohmann::json to_json(const FixedLoop& loop) {
    nlohmann::json am = nlohmann::json::array();
    for (const auto& [k, c] : loop.alpha_modes)
        am.push_back(nlohmann::json{{"k", k}, {"re", c.real()}, {"im", c.imag()}});
    nlohmann::json bm = nlohmann::json::array();
    for (const auto& [k, c] : loop.beta_modes)
        bm.push_back(nlohmann::json{{"k", k}, {"re", c.real()}, {"im", c.imag()}});
    return nlohmann::json{{"n", loop.n},
                          {"m", loop.m},
                          {"alpha_rate", loop.initial_alpha_rate},
                          {"beta0_prime", {loop.beta0_prime.real(), loop.beta0_prime.imag()}},
                          {"alpha_modes", am},
                          {"beta_modes", bm}};
}

}  // namespace loop_su2
}  // namespace hyperfn
