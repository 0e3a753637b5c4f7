#include <doctest.h>

#include <cmath>

#include "hyperfn/errors.hpp"
#include "hyperfn/localization.hpp"

using namespace hyperfn;

namespace {

const Complex kTwoPiIInv{0.0, -0.5 / M_PI};  // 1/(2 pi i)

Complex s2_pair_value(Complex z) {
    // (1/2pi i) (e^{iz} - e^{-iz})/z
    const Complex i{0.0, 1.0};
    return kTwoPiIInv * (std::exp(i * z) - std::exp(-i * z)) / z;
}

}  // namespace

TEST_SUITE("localization") {

TEST_CASE("builtin two-sphere data") {
    const LocalizationProblem s2 = builtin_s2();
    CHECK(s2.rank() == 1);
    REQUIRE(s2.fixed_points().size() == 2);
    const auto& north = s2.fixed_points()[0];
    const auto& south = s2.fixed_points()[1];

    CHECK(north.moment == std::vector<double>{1.0});
    CHECK(south.moment == std::vector<double>{-1.0});

    // Polarization -1 flips the north weight and leaves the south weight:
    // both polarized cones are the lower half line.
    CHECK(north.polarized.sign == -1);
    CHECK(south.polarized.sign == +1);
    CHECK(north.polarized.polarized[0] == Weight({Rational(-1)}));
    CHECK(south.polarized.polarized[0] == Weight({Rational(-1)}));
    CHECK(contains(north.polarized.cone, {Rational(-2)}));
    CHECK(contains(south.polarized.cone, {Rational(-2)}));
    CHECK_FALSE(contains(north.polarized.cone, {Rational(2)}));
}

TEST_CASE("euler reciprocal") {
    SUBCASE("north pole gives 1/(-z) on the lower half line") {
        const LocalizationProblem s2 = builtin_s2();
        const auto& north = s2.fixed_points()[0];
        const BoundaryValueTerm t = euler_reciprocal(north);
        CHECK(contains(t.cone(), {Rational(-1)}));
        const Complex z(0.3, -0.4);
        CHECK(std::abs(t.evaluate(std::span<const Complex>(&z, 1)).value - 1.0 / (-z)) < 1e-15);
    }
    SUBCASE("a single positive weight in the plane") {
        const LocalizationProblem p(2, {Rational(1), Rational(0)}, {"p"}, {{0.0, 0.0}},
                                    {{Weight({Rational(1), Rational(0)})}});
        const BoundaryValueTerm t = euler_reciprocal(p.fixed_points()[0]);
        CHECK(contains(t.cone(), {Rational(1), Rational(0)}));
        const Complex zs[2] = {Complex(0.5, 0.5), Complex(1.0, 0.0)};
        CHECK(std::abs(t.evaluate(zs).value - 1.0 / zs[0]) < 1e-15);
    }
    SUBCASE("opposite weights have no common half-space") {
        const LocalizationProblem p(2, {Rational(1), Rational(0)}, {"p"}, {{0.0, 0.0}},
                                    {{Weight({Rational(1), Rational(0)}),
                                      Weight({Rational(-1), Rational(0)})}});
        CHECK_THROWS_AS((void)euler_reciprocal(p.fixed_points()[0]), ConeEmpty);
    }
}

TEST_CASE("picken of the two-sphere") {
    const Hyperfunction L = picken(builtin_s2());
    REQUIRE(L.terms().size() == 2);
    for (const auto& t : L.terms()) CHECK(contains(t.cone(), {Rational(-1)}));

    // The assembled pair is [0, (e^{iz} - e^{-iz})/z] up to 1/(2 pi i):
    // both terms live on the lower half line and sum to the closed form.
    for (double x : {-1.3, 0.4, 2.2}) {
        const Complex z(x, -0.25);
        const auto v = wedge_evaluate(L, std::span<const Complex>(&z, 1));
        CHECK(std::abs(v.value - s2_pair_value(z)) < 1e-13);
    }
}

TEST_CASE("picken of the empty problem is zero") {
    const LocalizationProblem empty(1, {Rational(-1)}, {}, {}, {});
    const Hyperfunction L = picken(empty);
    CHECK(L.terms().empty());
    const double x = 0.5;
    const auto r = boundary_evaluate(L, std::span<const double>(&x, 1));
    CHECK(r.ok());
    CHECK(std::abs(r.value) == 0.0);
}

TEST_CASE("opposite polarization gives the upper-half presentation") {
    const LocalizationProblem flipped = builtin_s2().with_polarization({Rational(1)});
    const Hyperfunction L = picken(flipped);
    REQUIRE(L.terms().size() == 2);
    for (const auto& t : L.terms()) CHECK(contains(t.cone(), {Rational(1)}));
    for (double x : {-0.9, 0.6}) {
        const Complex z(x, 0.25);
        const auto v = wedge_evaluate(L, std::span<const Complex>(&z, 1));
        CHECK(std::abs(v.value - s2_pair_value(z)) < 1e-13);
    }
}

TEST_CASE("the two presentations agree as hyperfunctions") {
    const Hyperfunction a = picken(builtin_s2());
    const Hyperfunction b = picken(builtin_s2().with_polarization({Rational(1)}));
    const double lo = -2.0, hi = 2.0;
    const auto verdict =
        equality_probe(a, b, std::span<const double>(&lo, 1), std::span<const double>(&hi, 1));
    CHECK(verdict.consistent_with_equal);
    CHECK(verdict.skipped.empty());
}

TEST_CASE("boundary values pair up under reflection") {
    const Hyperfunction L = picken(builtin_s2());
    for (double x : {0.3, 0.9, 1.7}) {
        const double mx = -x;
        const auto at = boundary_evaluate(L, std::span<const double>(&x, 1));
        const auto ref = boundary_evaluate(L, std::span<const double>(&mx, 1));
        REQUIRE(at.ok());
        REQUIRE(ref.ok());
        CHECK(std::abs(at.value - std::conj(ref.value)) < at.err + ref.err + 1e-8);
    }
}

TEST_CASE("flipping an input weight flips only the sign") {
    // Same geometry data except the north weight enters negated: the
    // polarized weight and cone are unchanged, the parity flips, and the
    // north term negates.
    const LocalizationProblem orig = builtin_s2();
    const LocalizationProblem flipped(1, {Rational(-1)}, {"N", "S"}, {{1.0}, {-1.0}},
                                      {{Weight({Rational(-1)})}, {Weight({Rational(-1)})}});
    const auto& n0 = orig.fixed_points()[0];
    const auto& n1 = flipped.fixed_points()[0];
    CHECK(n0.polarized.polarized == n1.polarized.polarized);
    CHECK(same_membership(n0.polarized.cone, n1.polarized.cone));
    CHECK(n0.polarized.sign == -n1.polarized.sign);

    const Hyperfunction L0 = picken(orig);
    const Hyperfunction L1 = picken(flipped);
    const Complex z(0.7, -0.2);
    const Complex t0 = L0.terms()[0].evaluate(std::span<const Complex>(&z, 1)).value;
    const Complex t1 = L1.terms()[0].evaluate(std::span<const Complex>(&z, 1)).value;
    CHECK(std::abs(t0 + t1) < 1e-15);
}

TEST_CASE("scaling the moment map reparametrizes the phases") {
    const LocalizationProblem doubled(1, {Rational(-1)}, {"N", "S"}, {{2.0}, {-2.0}},
                                      {{Weight({Rational(1)})}, {Weight({Rational(-1)})}});
    const Hyperfunction L1 = picken(builtin_s2());
    const Hyperfunction L2 = picken(doubled);
    for (double x : {0.35, 1.1}) {
        const double x2 = 2.0 * x;
        const auto a = boundary_evaluate(L2, std::span<const double>(&x, 1));
        const auto b = boundary_evaluate(L1, std::span<const double>(&x2, 1));
        REQUIRE(a.ok());
        REQUIRE(b.ok());
        // one weight per fixed point: L_{2mu}(x) = 2 L_mu(2x)
        CHECK(std::abs(a.value - 2.0 * b.value) < 2.0 * (a.err + b.err) + 1e-7);
    }
}

TEST_CASE("localization problems round-trip through JSON") {
    const LocalizationProblem s2 = builtin_s2();
    const nlohmann::json j = to_json(s2);
    const LocalizationProblem back =
        localization_problem_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.rank() == s2.rank());
    CHECK(back.polarization() == s2.polarization());
    REQUIRE(back.fixed_points().size() == 2);
    CHECK(back.fixed_points()[0].label == "N");
    CHECK(back.fixed_points()[0].moment == std::vector<double>{1.0});
    CHECK(back.fixed_points()[1].weights[0] == Weight({Rational(-1)}));

    const Complex z(0.4, -0.3);
    const auto a = wedge_evaluate(picken(s2), std::span<const Complex>(&z, 1));
    const auto b = wedge_evaluate(picken(back), std::span<const Complex>(&z, 1));
    CHECK(a.value.real() == b.value.real());
    CHECK(a.value.imag() == b.value.imag());
}

TEST_CASE("invalid polarization is rejected at construction") {
    CHECK_THROWS_AS(LocalizationProblem(2, {Rational(0), Rational(1)}, {"p"}, {{0.0, 0.0}},
                                        {{Weight({Rational(1), Rational(0)})}}),
                    Error);
}

}  // TEST_SUITE
