#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperfn/errors.hpp"
#include "hyperfn/fourier.hpp"

using namespace hyperfn;

namespace {

ExprPtr z() { return Expr::coord(0); }

ConvexCone upper() { return ConvexCone(1, {HalfSpace{Weight({Rational(1)})}}); }
ConvexCone lower() { return ConvexCone(1, {HalfSpace{Weight({Rational(-1)})}}); }

// e^{-i(zeta-a) z} / (z (1+e^{z})) for fixed zeta
ExprPtr s2_integrand(Complex zeta, double a) {
    ExprPtr kernel =
        Expr::exp(Expr::mul(Expr::constant(Complex(0.0, -1.0) * (zeta - a)), z()));
    ExprPtr denom = Expr::mul(z(), Expr::add(Expr::real(1.0), Expr::exp(z())));
    return Expr::div(kernel, denom);
}

Complex eval_at(const ExprPtr& e, Complex zeta) { return evaluate1(e, zeta); }

}  // namespace

TEST_SUITE("fourier") {

TEST_CASE("orthant partition in one variable") {
    const PartitionOfUnity p = orthant_partition(1);
    REQUIRE(p.pieces.size() == 2);
    // chi_+ = 1/(1+e^{-z}), chi_- = 1/(1+e^{z})
    const Complex at(0.7, -0.2);
    Complex plus, minus;
    for (const auto& piece : p.pieces) {
        const Complex v = evaluate1(piece.chi, at);
        if (piece.label == "+") plus = v;
        else minus = v;
    }
    CHECK(std::abs(plus - 1.0 / (1.0 + std::exp(-at))) < 1e-15);
    CHECK(std::abs(minus - 1.0 / (1.0 + std::exp(at))) < 1e-15);
    CHECK(std::abs(plus + minus - 1.0) < 1e-14);
}

TEST_CASE("orthant partition in two variables") {
    const PartitionOfUnity p = orthant_partition(2);
    REQUIRE(p.pieces.size() == 4);
    const Complex zs[2] = {Complex(1.0, 1.0), Complex(2.0, -1.0)};
    Complex sum{0.0, 0.0};
    for (const auto& piece : p.pieces) sum += evaluate(*piece.chi, zs);
    CHECK(std::abs(sum - 1.0) < 1e-14);

    for (const auto& piece : p.pieces) {
        if (piece.label != "++") continue;
        const Complex far[2] = {Complex(-10.0, 0.0), Complex(-10.0, 0.0)};
        CHECK(std::abs(evaluate(*piece.chi, far)) < std::exp(-10.0));
        // decays outside its own orthant
        const GrowthClass g = classify_growth(*piece.chi, ConvexCone::full_space(2));
        REQUIRE(g.kind == GrowthKind::ExponentiallyDecreasingOn);
    }
    validate_partition(p);
}

TEST_CASE("mixed partition of the plane") {
    const PartitionOfUnity p = mixed_partition_2d();
    REQUIRE(p.pieces.size() == 4);
    const Complex zs[2] = {Complex(0.5, 0.2), Complex(-1.0, 0.1)};
    Complex sum{0.0, 0.0};
    for (const auto& piece : p.pieces) sum += evaluate(*piece.chi, zs);
    CHECK(std::abs(sum - 1.0) < 1e-14);

    const Complex origin[2] = {Complex(0.0, 0.0), Complex(0.0, 0.0)};
    for (const auto& piece : p.pieces)
        CHECK(std::abs(evaluate(*piece.chi, origin) - 0.25) < 1e-15);

    // the e^{+z1}, e^{+pi z2} piece decays along the (t, t) ray
    for (const auto& piece : p.pieces) {
        if (piece.label != "--") continue;
        double prev = 1e300;
        for (double t : {2.0, 4.0, 8.0, 16.0}) {
            const Complex ray[2] = {Complex(t, 0.0), Complex(t, 0.0)};
            const double mag = std::abs(evaluate(*piece.chi, ray));
            CHECK(mag < prev);
            prev = mag;
        }
        CHECK(prev < std::exp(-16.0));
    }
    validate_partition(p);
}

TEST_CASE("partition identity at many random points") {
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> re(-5.0, 5.0), im(-1.5, 1.5);
    for (const PartitionOfUnity& p : {orthant_partition(1), mixed_partition_2d()}) {
        double worst = 0.0;
        for (int s = 0; s < 2000; ++s) {
            std::vector<Complex> zs(p.dim);
            for (auto& c : zs) c = Complex(re(rng), im(rng));
            Complex sum{0.0, 0.0};
            for (const auto& piece : p.pieces) sum += evaluate(*piece.chi, zs);
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        CHECK(worst < 1e-13);
    }
}

TEST_CASE("contour integral matches the residue closed form") {
    const ContourSettings cfg;
    double worst = 0.0;
    for (double a : {1.0, -1.0}) {
        const ExprPtr oracle = residue_sum_1d(a, DenomSign::Plus);
        for (int j = 0; j < 25; ++j) {
            const Complex zeta(-2.5 + 5.0 * j / 24.0, 0.1 + 0.8 * ((j * 7) % 9) / 9.0);
            const ContourIntegral got = contour_integral_1d(s2_integrand(zeta, a), -cfg.delta, cfg);
            const Complex want = eval_at(oracle, zeta);
            worst = std::max(worst, std::abs(got.value - want));
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("contour height independence") {
    const ContourSettings cfg;
    double worst = 0.0;
    for (int j = 0; j < 10; ++j) {
        const Complex zeta(-2.0 + 4.0 * j / 9.0, 0.15 + 0.6 * (j % 3) / 3.0);
        const ExprPtr f = s2_integrand(zeta, 1.0);
        const ContourIntegral a = contour_integral_1d(f, -0.1, cfg);
        const ContourIntegral b = contour_integral_1d(f, -0.3, cfg);
        worst = std::max(worst, std::abs(a.value - b.value));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("pole on the contour is rejected") {
    // 1/((z + 0.1 i)(1+e^z)) has a pole exactly on the line Im z = -0.1.
    const Complex zeta(0.3, 0.4);
    ExprPtr kernel = Expr::exp(Expr::mul(Expr::constant(Complex(0.0, -1.0) * zeta), z()));
    ExprPtr denom = Expr::mul(Expr::add(z(), Expr::constant(Complex(0.0, 0.1))),
                              Expr::add(Expr::real(1.0), Expr::exp(z())));
    CHECK_THROWS_AS((void)contour_integral_1d(Expr::div(kernel, denom), -0.1, ContourSettings{}),
                    ContourBlocked);
}

TEST_CASE("non-decaying integrands are rejected") {
    // no cutoff at all: e^{-i zeta z}/z never decays on both tails
    const Complex zeta(0.5, 0.5);
    ExprPtr bare = Expr::div(
        Expr::exp(Expr::mul(Expr::constant(Complex(0.0, -1.0) * zeta), z())), z());
    CHECK_THROWS_AS((void)contour_integral_1d(bare, -0.1, ContourSettings{}), NotIntegrable);
}

TEST_CASE("residue closed forms") {
    // lower-contour forms centered at +-1
    const ExprPtr at_plus = residue_sum_1d(1.0, DenomSign::Plus);
    const ExprPtr at_minus = residue_sum_1d(-1.0, DenomSign::Plus);
    const Complex zeta(0.4, 0.35);
    const Complex tanh_p = std::tanh(M_PI * (zeta - 1.0) / 2.0);
    const Complex tanh_m = std::tanh(M_PI * (zeta + 1.0) / 2.0);
    CHECK(std::abs(eval_at(at_plus, zeta) - std::log(tanh_p)) < 1e-13);
    CHECK(std::abs(eval_at(at_minus, zeta) - std::log(tanh_m)) < 1e-13);
    // branch point at the shift
    CHECK_THROWS_AS((void)eval_at(at_plus, Complex(1.0, 0.0)), PoleError);
    // the opposite denominator sign negates the form
    const ExprPtr flipped = residue_sum_1d(1.0, DenomSign::Minus);
    const Complex below(0.4, -0.35);
    CHECK(std::abs(eval_at(flipped, below) + std::log(std::tanh(M_PI * (below - 1.0) / 2.0))) <
          1e-13);
}

TEST_CASE("fourier transform dual-cone bookkeeping") {
    const Hyperfunction f(
        1, {BoundaryValueTerm(Expr::exp(Expr::mul(Expr::imaginary_unit(), z())), lower(), "t")});
    const PartitionOfUnity p = orthant_partition(1);
    const FourierResult out = fourier_transform(f, p, 1e-6);
    REQUIRE(out.transform.terms().size() == 2);
    for (std::size_t i = 0; i < out.provenance.size(); ++i) {
        const auto& prov = out.provenance[i];
        const ConvexCone expected = negated_cone(polar_dual(p.pieces[i].sigma));
        CHECK(same_membership(out.transform.terms()[i].cone(), expected));
        CHECK(same_membership(out.transform.terms()[i].cone(), prov.dual_cone));
        // chi_- localizes {x<=0}, so its transform lands on the upper side
        if (prov.piece == "-") CHECK(contains(prov.dual_cone, {Rational(1)}));
        if (prov.piece == "+") CHECK(contains(prov.dual_cone, {Rational(-1)}));
    }
}

TEST_CASE("fourier transform of a single wedge term against the shifted oracle") {
    // b_+(e^{iz}/z): the chi_- piece integrates along Im z = +delta; moving
    // the contour down to -delta crosses the z = 0 pole with residue 1/2, so
    // the upper-contour value is the lower-contour closed form minus i pi.
    const Hyperfunction f(
        1, {BoundaryValueTerm(
               Expr::div(Expr::exp(Expr::mul(Expr::imaginary_unit(), z())), z()), upper(),
               "jn+")});
    const FourierResult out = fourier_transform(f, orthant_partition(1), 1e-6);
    const ExprPtr oracle = residue_sum_1d(1.0, DenomSign::Plus);
    double worst = 0.0;
    for (std::size_t i = 0; i < out.provenance.size(); ++i) {
        if (out.provenance[i].piece != "-") continue;
        for (int j = 0; j < 8; ++j) {
            const Complex zeta(-1.5 + 3.0 * j / 7.0, 0.2 + 0.5 * (j % 2));
            const Complex got =
                out.transform.terms()[i].evaluate(std::span<const Complex>(&zeta, 1)).value;
            const Complex want = eval_at(oracle, zeta) - Complex(0.0, M_PI);
            worst = std::max(worst, std::abs(got - want));
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("fourier transform is linear") {
    const ExprPtr e1 = Expr::div(Expr::exp(Expr::mul(Expr::imaginary_unit(), z())), z());
    const ExprPtr e2 = Expr::div(Expr::exp(Expr::mul(Expr::constant(Complex(0.0, -1.0)), z())),
                                 Expr::neg(z()));
    const Hyperfunction f(1, {BoundaryValueTerm(e1, lower(), "f")});
    const Hyperfunction g(1, {BoundaryValueTerm(e2, lower(), "g")});
    const PartitionOfUnity p = orthant_partition(1);
    const FourierResult ft_f = fourier_transform(f, p, 1e-7);
    const FourierResult ft_g = fourier_transform(g, p, 1e-7);
    const FourierResult ft_sum = fourier_transform(add(f, g), p, 1e-7);

    // Quadrature cost grows like 1/eps, so probe with a shallow ladder.
    std::vector<double> eps;
    for (int k = 4; k <= 8; ++k) eps.push_back(std::ldexp(1.0, -k));
    for (double x0 : {0.0, 0.6}) {
        const double x = x0;
        const auto a = boundary_evaluate(ft_sum.transform, std::span<const double>(&x, 1), eps);
        const auto b = boundary_evaluate(ft_f.transform, std::span<const double>(&x, 1), eps);
        const auto c = boundary_evaluate(ft_g.transform, std::span<const double>(&x, 1), eps);
        REQUIRE(a.ok());
        REQUIRE(b.ok());
        REQUIRE(c.ok());
        CHECK(std::abs(a.value - (b.value + c.value)) < a.err + b.err + c.err + 1e-6);
    }
}

TEST_CASE("fourier transform rejects unclassifiable growth") {
    const Hyperfunction f(
        1, {BoundaryValueTerm(Expr::exp(Expr::pow(z(), 2)), upper(), "bad")});
    CHECK_THROWS_AS((void)fourier_transform(f, orthant_partition(1), 1e-6),
                    NotSlowlyIncreasing);
}

TEST_CASE("fourier transform of zero is zero") {
    const FourierResult out = fourier_transform(Hyperfunction(1), orthant_partition(1), 1e-6);
    CHECK(out.transform.terms().empty());
    const double x = 0.3;
    const auto r = boundary_evaluate(out.transform, std::span<const double>(&x, 1));
    // empty sums cost nothing even on the default ladder
    CHECK(r.ok());
    CHECK(std::abs(r.value) == 0.0);
}

TEST_CASE("contour settings round-trip through JSON") {
    ContourSettings s;
    s.delta = 0.2;
    s.tol = 1e-8;
    const ContourSettings back = contour_settings_from_json(to_json(s));
    CHECK(back.delta == s.delta);
    CHECK(back.tol == s.tol);
    CHECK(back.r0 == s.r0);
}

}  // TEST_SUITE
