#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bidisc/rif.hpp"
#include "bidisc/rng.hpp"
#include "bidisc/zoo.hpp"

using namespace bidisc;

TEST_CASE("Knese function at simple points") {
    const Rif phi = zoo::knese();
    CHECK(std::abs(phi.eval({0, 0}, {0, 0})) < 1e-15);
    for (double r : {0.1, 0.5, 0.9, 0.99}) {
        // (2r^2 - 2r)/(2 - 2r) = -r on the real diagonal
        CHECK(std::abs(phi.eval({r, 0}, {r, 0}) - Complex(-r, 0)) < 1e-12);
    }
    const Complex i{0, 1};
    CHECK(std::abs(std::abs(phi.eval(i, i)) - 1.0) < 1e-10);
}

TEST_CASE("eval_rif refuses near-singular denominators") {
    const Rif phi = zoo::knese();
    CHECK_THROWS_AS(phi.eval({1, 0}, {1, 0}), DenominatorTooSmall);
    CHECK(!phi.try_eval({1, 0}, {1, 0}).has_value());
}

TEST_CASE("interior modulus below one on pseudo-random samples") {
    const Rif phi = zoo::knese();
    const SubstreamRng rng(42, 0);
    for (std::uint64_t i = 0; i < 20000; ++i) {
        const double r1 = std::sqrt(rng.uniform(i, 0));
        const double r2 = std::sqrt(rng.uniform(i, 1));
        const Complex z1 = std::polar(r1, kTwoPi * rng.uniform(i, 2));
        const Complex z2 = std::polar(r2, kTwoPi * rng.uniform(i, 3));
        const auto v = phi.try_eval(z1, z2);
        REQUIRE(v.has_value());
        CHECK(std::abs(*v) < 1.0);
    }
}

TEST_CASE("stability scan of the Knese denominator") {
    const auto rep = stability_check(zoo::knese().denominator(), 16, 0.1);
    CHECK(rep.min_abs == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(std::abs(rep.argmin_z1 - Complex(0.9, 0)) < 1e-12);
}

TEST_CASE("stability scan flags an interior zero") {
    BiPoly::CoeffGrid g(2, 1);
    g(0, 0) = Complex(-0.5, 0);
    g(1, 0) = Complex(1, 0);
    CHECK_THROWS_AS(stability_check(BiPoly(std::move(g)), 16, 0.1),
                    InstabilityDetected);
}

TEST_CASE("stability minimum is rotation invariant") {
    for (double a : {0.3, 2.0, 4.4}) {
        const auto rep =
            stability_check(zoo::phi_ab(a, 1.9).denominator(), 16, 0.1);
        CHECK(rep.min_abs == doctest::Approx(0.2).epsilon(1e-6));
    }
}

TEST_CASE("zero_set_interior_check on 2 z1 z2 - 2") {
    const BiPoly P = build_pzeta(zoo::knese().denominator(), {1, 0});
    CHECK(zero_set_interior_check(P, 0.1, 16) ==
          doctest::Approx(0.38).epsilon(1e-12));
    // Zeros only on the boundary: the minimum collapses with the margin.
    const double coarse = zero_set_interior_check(P, 0.2, 16);
    const double fine = zero_set_interior_check(P, 0.01, 16);
    CHECK(fine < coarse);
    CHECK(fine > 0.0);
    CHECK(fine < 0.05);
}

TEST_CASE("zero_set_interior_check of a constant is its modulus") {
    CHECK(zero_set_interior_check(BiPoly::constant({0, -3}), 0.1, 8) ==
          doctest::Approx(3.0));
}

TEST_CASE("nt_limit of the Knese function at (1,1)") {
    const auto nt = nt_limit(zoo::knese(), BoundaryPoint(0, 0));
    CHECK(std::abs(nt.value - Complex(-1, 0)) < 1e-10);
    CHECK(std::abs(nt.modulus - 1.0) < 1e-10);
}

TEST_CASE("nt_limit at a smooth boundary point matches direct evaluation") {
    const Rif phi = zoo::knese();
    const BoundaryPoint zeta(std::numbers::pi / 2.0, 0.0);  // (i, 1)
    const auto nt = nt_limit(phi, zeta);
    const Complex direct = phi.eval(zeta.z1(), zeta.z2());
    CHECK(std::abs(nt.value - direct) < 1e-8);
    CHECK(std::abs(nt.modulus - 1.0) < 1e-8);
}

TEST_CASE("nt_limit of the coordinate RIF is the coordinate") {
    const BoundaryPoint zeta(1.1, 2.2);
    const auto nt = nt_limit(zoo::coordinate1(), zeta);
    CHECK(std::abs(nt.value - zeta.z1()) < 1e-12);
}

TEST_CASE("singularities of the Knese function") {
    const auto sings = find_singularities(zoo::knese(), 128);
    REQUIRE(sings.size() == 1);
    CHECK(angle_dist(sings[0].theta1, 0.0) < 1e-8);
    CHECK(angle_dist(sings[0].theta2, 0.0) < 1e-8);
}

TEST_CASE("singularity of 2 - A z1 - B z2 sits at (conj A, conj B)") {
    const double a = 1.1, b = 4.9;
    const auto sings = find_singularities(zoo::phi_ab(a, b), 128);
    REQUIRE(sings.size() == 1);
    // The torus zero is tangential, so double precision localizes the
    // angles to about sqrt(eps).
    CHECK(angle_dist(sings[0].theta1, kTwoPi - a) < 1e-6);
    CHECK(angle_dist(sings[0].theta2, kTwoPi - b) < 1e-6);
}

TEST_CASE("a polynomial without torus zeros yields no singularities") {
    BiPoly::CoeffGrid g(2, 1);
    g(0, 0) = Complex(2, 0);
    g(1, 0) = Complex(-1, 0);
    const Rif phi(BiPoly(std::move(g)), 0, 0);
    CHECK(find_singularities(phi, 64).empty());
}

TEST_CASE("identity rotation leaves coefficients intact") {
    const Rif phi = zoo::knese();
    const Rif rot = rotate_symbol(phi, BoundaryPoint(0, 0),
                                  BoundaryPoint(0, 0), {1, 0});
    CHECK((rot.denominator().coeffs() - phi.denominator().coeffs())
              .cwiseAbs()
              .maxCoeff() < 1e-15);
}

TEST_CASE("rotating phi_AB to (1,1) recovers the Knese denominator") {
    const double a = 0.8, b = 5.1;
    const Rif psi = zoo::phi_ab(a, b);
    const Rif rot = rotate_symbol(psi, BoundaryPoint(kTwoPi - a, kTwoPi - b),
                                  BoundaryPoint(0, 0), {1, 0});
    // Up to the unimodular balancing factor the denominator is 2 - z1 - z2.
    const Complex gamma = rot.denominator().coeffs()(0, 0) / 2.0;
    CHECK(std::abs(std::abs(gamma) - 1.0) < 1e-12);
    const auto expected = (gamma * zoo::knese().denominator()).coeffs();
    CHECK((rot.denominator().coeffs() - expected).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("rotated symbol has a singularity at the target") {
    const double a = 2.3, b = 0.4;
    const Rif psi = zoo::phi_ab(a, b);
    const BoundaryPoint target(1.0, 5.0);
    const Rif rot = rotate_symbol(psi, BoundaryPoint(kTwoPi - a, kTwoPi - b),
                                  target, {1, 0});
    const auto sings = find_singularities(rot, 128);
    REQUIRE(sings.size() == 1);
    CHECK(angle_dist(sings[0].theta1, target.theta1) < 1e-6);
    CHECK(angle_dist(sings[0].theta2, target.theta2) < 1e-6);
}

TEST_CASE("rotation preserves modulus at corresponding points") {
    const Rif phi = zoo::knese();
    const BoundaryPoint source(0, 0), target(2.0, 3.5);
    const Complex lambda = std::polar(1.0, 0.77);
    const Rif rot = rotate_symbol(phi, source, target, lambda);
    const Complex mu1 = source.z1() / target.z1();
    const Complex mu2 = source.z2() / target.z2();
    const SubstreamRng rng(5, 1);
    for (std::uint64_t i = 0; i < 200; ++i) {
        const Complex w1 =
            std::polar(0.97 * rng.uniform(i, 0), kTwoPi * rng.uniform(i, 1));
        const Complex w2 =
            std::polar(0.97 * rng.uniform(i, 2), kTwoPi * rng.uniform(i, 3));
        const double lhs = std::abs(rot.eval(w1 / mu1, w2 / mu2));
        const double rhs = std::abs(phi.eval(w1, w2));
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("rotate_symbol rejects a smooth source for a genuine rotation") {
    CHECK_THROWS_AS(rotate_symbol(zoo::knese(), BoundaryPoint(1.0, 1.0),
                                  BoundaryPoint(0, 0), {1, 0}),
                    SourceNotSingular);
}

TEST_CASE("torus modulus is one away from singularities") {
    const Rif phi = zoo::knese();
    for (int a = 0; a < 64; ++a)
        for (int b = 0; b < 64; ++b) {
            const BoundaryPoint t(kTwoPi * a / 64, kTwoPi * b / 64);
            if (std::abs(t.z1() - Complex(1, 0)) < 1e-2 &&
                std::abs(t.z2() - Complex(1, 0)) < 1e-2)
                continue;
            const auto v = phi.try_eval(t.z1(), t.z2());
            REQUIRE(v.has_value());
            CHECK(std::abs(std::abs(*v) - 1.0) < 1e-9);
        }
}
