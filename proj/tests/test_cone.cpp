#include <doctest.h>

#include <random>

#include "hyperfn/cone.hpp"
#include "hyperfn/errors.hpp"

using namespace hyperfn;

namespace {

Rational random_rational(std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 50);
    return Rational(num(rng), den(rng));
}

RationalVector random_point(std::mt19937& rng, std::size_t dim) {
    RationalVector v(dim);
    for (auto& q : v) q = random_rational(rng);
    return v;
}

ConvexCone gamma0() {
    return ConvexCone(2, {HalfSpace{Weight({Rational(2), Rational(1)})},
                          HalfSpace{Weight({Rational(-2), Rational(1)})}});
}

ConvexCone gamma_nonzero() {
    auto hs = gamma0().halfspaces();
    hs.push_back(HalfSpace{Weight({Rational(1), Rational(0)})});
    return ConvexCone(2, std::move(hs));
}

}  // namespace

TEST_SUITE("cone") {

TEST_CASE("halfspace of a weight is the strict positivity set") {
    const HalfSpace h1 = halfspace_of_weight(Weight({Rational(1), Rational(0)}));
    CHECK(h1.contains({Rational(1), Rational(-5)}));
    CHECK_FALSE(h1.contains({Rational(0), Rational(3)}));

    const HalfSpace h2 = halfspace_of_weight(Weight({Rational(2), Rational(1)}));
    CHECK(h2.contains({Rational(1), Rational(0)}));
    CHECK_FALSE(h2.contains({Rational(-1), Rational(1)}));

    // (-2,1) at (1/10, 1): -2/10 + 1 = 8/10 > 0
    const HalfSpace h3 = halfspace_of_weight(Weight({Rational(-2), Rational(1)}));
    CHECK(h3.contains({Rational(1, 10), Rational(1)}));

    CHECK_THROWS_AS(Weight({Rational(0), Rational(0)}), Error);
}

TEST_CASE("intersect_cones reproduces the loop-space cones") {
    const ConvexCone a(2, {HalfSpace{Weight({Rational(2), Rational(1)})}});
    const ConvexCone b(2, {HalfSpace{Weight({Rational(-2), Rational(1)})}});
    const ConvexCone meet = intersect_cones({a, b});
    CHECK(same_membership(meet, gamma0()));

    const ConvexCone with_x(2, {HalfSpace{Weight({Rational(1), Rational(0)})}});
    CHECK(same_membership(intersect_cones({gamma0(), with_x}), gamma_nonzero()));

    // idempotence
    CHECK(same_membership(intersect_cones({gamma0(), gamma0()}), gamma0()));
}

TEST_CASE("intersection membership is the conjunction of memberships") {
    std::mt19937 rng(7);
    const ConvexCone a = gamma0();
    const ConvexCone b(2, {HalfSpace{Weight({Rational(1), Rational(0)})},
                           HalfSpace{Weight({Rational(1), Rational(1)})}});
    const ConvexCone meet = intersect_cones({a, b});
    for (int i = 0; i < 1000; ++i) {
        const RationalVector y = random_point(rng, 2);
        CHECK(meet.contains(y) == (a.contains(y) && b.contains(y)));
    }
}

TEST_CASE("is_open_nonempty") {
    CHECK(is_open_nonempty(gamma0()));
    CHECK(is_open_nonempty(ConvexCone::full_space(3)));
    const ConvexCone contradiction(1, {HalfSpace{Weight({Rational(1)})},
                                       HalfSpace{Weight({Rational(-1)})}});
    CHECK_FALSE(is_open_nonempty(contradiction));
}

TEST_CASE("contains is exact on the loop-space cones") {
    CHECK(contains(gamma0(), {Rational(0), Rational(1)}));
    CHECK_FALSE(contains(gamma0(), {Rational(1), Rational(1)}));
    CHECK_FALSE(contains(gamma_nonzero(), {Rational(0), Rational(1)}));
    CHECK_THROWS_AS(contains(gamma0(), RationalVector{Rational(1)}), DimensionMismatch);
}

TEST_CASE("cones are closed under scaling and midpoints") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> pos(1, 400);
    const ConvexCone c = gamma_nonzero();
    int found = 0;
    while (found < 200) {
        const RationalVector y = random_point(rng, 2);
        const RationalVector y2 = random_point(rng, 2);
        if (!c.contains(y) || !c.contains(y2)) continue;
        ++found;
        const Rational s(pos(rng), pos(rng));
        RationalVector scaled(2), mid(2);
        for (int i = 0; i < 2; ++i) {
            scaled[i] = s * y[i];
            mid[i] = (y[i] + y2[i]) / 2;
        }
        CHECK(c.contains(scaled));
        CHECK(c.contains(mid));
    }
}

TEST_CASE("polarize flips onto the positive side of xi") {
    SUBCASE("single weight against a negative polarization") {
        const auto pol = polarize({Weight({Rational(1)})}, {Rational(-1)});
        CHECK(pol.sign == -1);
        CHECK(pol.polarized[0] == Weight({Rational(-1)}));
        CHECK(contains(pol.cone, {Rational(-3)}));
        CHECK_FALSE(contains(pol.cone, {Rational(2)}));
    }
    SUBCASE("flip recorded in the sign") {
        const auto pol =
            polarize({Weight({Rational(-2), Rational(-1)})}, {Rational(1, 4), Rational(1)});
        CHECK(pol.sign == -1);
        CHECK(pol.polarized[0] == Weight({Rational(2), Rational(1)}));
    }
    SUBCASE("already positive weights are untouched") {
        const std::vector<Weight> ws{Weight({Rational(1), Rational(0)}),
                                     Weight({Rational(1), Rational(2)})};
        const auto pol = polarize(ws, {Rational(1), Rational(1)});
        CHECK(pol.sign == 1);
        CHECK(pol.polarized == ws);
    }
    SUBCASE("vanishing evaluation is rejected") {
        CHECK_THROWS_WITH_AS(polarize({Weight({Rational(0), Rational(1)})},
                                      {Rational(1), Rational(0)}),
                             doctest::Contains("vanishes"), Error);
    }
}

TEST_CASE("polarize is idempotent and lands positive on xi") {
    std::mt19937 rng(23);
    const RationalVector xi{Rational(1, 4), Rational(1)};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Weight> ws;
        for (int j = 0; j < 5; ++j) {
            RationalVector c = random_point(rng, 2);
            if (dot(c, xi) == 0) c[0] += Rational(1, 997);
            if (c[0] == 0 && c[1] == 0) c[1] = 1;
            ws.push_back(Weight(c));
        }
        const auto pol = polarize(ws, xi);
        for (const auto& w : pol.polarized) CHECK(w(xi) > 0);
        const auto again = polarize(pol.polarized, xi);
        CHECK(again.sign == 1);
        CHECK(again.polarized == pol.polarized);
    }
}

TEST_CASE("polar dual") {
    SUBCASE("first quadrant is self dual") {
        const ConvexCone quad(2, {HalfSpace{Weight({Rational(1), Rational(0)})},
                                  HalfSpace{Weight({Rational(0), Rational(1)})}});
        CHECK(same_membership(polar_dual(quad), quad));
    }
    SUBCASE("dual of a half-plane is a ray with empty interior") {
        const ConvexCone half(2, {HalfSpace{Weight({Rational(0), Rational(1)})}});
        const ConvexCone dual = polar_dual(half);
        CHECK_FALSE(is_open_nonempty(dual));
        // closure membership: the ray (0, t), t >= 0
        bool has_pos_axis = false;
        for (const auto& h : dual.halfspaces())
            if (h.weight == Weight({Rational(0), Rational(1)})) has_pos_axis = true;
        CHECK(has_pos_axis);
    }
    SUBCASE("dual of gamma0 is generated by the defining functionals") {
        const ConvexCone dual = polar_dual(gamma0());
        // (0,1) is interior to the dual; (1,0) is not in it.
        CHECK(contains(dual, {Rational(0), Rational(1)}));
        for (const auto& h : dual.halfspaces()) {
            CHECK(h.weight(RationalVector{Rational(2), Rational(1)}) >= 0);
            CHECK(h.weight(RationalVector{Rational(-2), Rational(1)}) >= 0);
        }
    }
    SUBCASE("empty cone is rejected") {
        const ConvexCone contradiction(1, {HalfSpace{Weight({Rational(1)})},
                                           HalfSpace{Weight({Rational(-1)})}});
        CHECK_THROWS_AS(polar_dual(contradiction), ConeEmpty);
    }
}

TEST_CASE("double dual preserves interior membership") {
    std::mt19937 rng(31);
    for (const ConvexCone& c : {gamma0(), gamma_nonzero()}) {
        const ConvexCone dd = polar_dual(polar_dual(c));
        int hits = 0;
        while (hits < 100) {
            const RationalVector y = random_point(rng, 2);
            if (!c.contains(y)) continue;
            ++hits;
            CHECK(dd.contains(y));
        }
        // and a point outside the closure stays outside
        CHECK_FALSE(dd.contains({Rational(1), Rational(-1)}));
    }
}

TEST_CASE("pruning keeps membership") {
    auto hs = gamma0().halfspaces();
    hs.push_back(HalfSpace{Weight({Rational(0), Rational(1)})});  // implied by the others
    const ConvexCone fat(2, hs);
    const ConvexCone slim = fat.pruned();
    CHECK(slim.halfspaces().size() == 2);
    CHECK(same_membership(fat, slim));
}

TEST_CASE("interior witness is centered and deterministic") {
    const RationalVector w0 = interior_witness(gamma0());
    CHECK(w0 == RationalVector{Rational(0), Rational(1)});
    const RationalVector wn = interior_witness(gamma_nonzero());
    CHECK(wn == RationalVector{Rational(1, 4), Rational(3, 4)});
    CHECK(gamma_nonzero().contains(wn));
}

TEST_CASE("weights and cones round-trip through JSON exactly") {
    const Weight w({Rational(22, 7), Rational(-3), Rational(0)});
    CHECK(weight_from_json(to_json(w)) == w);

    const ConvexCone c = gamma_nonzero();
    const ConvexCone back = cone_from_json(to_json(c), 2);
    REQUIRE(back.halfspaces().size() == c.halfspaces().size());
    for (std::size_t i = 0; i < c.halfspaces().size(); ++i)
        CHECK(back.halfspaces()[i].weight == c.halfspaces()[i].weight);

    const ConvexCone full = ConvexCone::full_space(3);
    CHECK(cone_from_json(to_json(full), 3).dimension() == 3);
}

}  // TEST_SUITE
