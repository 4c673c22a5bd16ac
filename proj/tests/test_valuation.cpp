#include <doctest.h>

#include <cmath>
#include <random>

#include "bidwars/errors.hpp"
#include "bidwars/numerics.hpp"
#include "bidwars/valuation.hpp"

using namespace bidwars;

TEST_CASE("valuation families evaluate in closed form") {
    const auto q2 = ValuationSpec::monomial(2.0);
    CHECK(q2.eval(0.5) == doctest::Approx(0.25));
    CHECK(q2.derivative(0.5) == doctest::Approx(1.0));
    CHECK(q2.integral(0.0, 1.0) == doctest::Approx(1.0 / 3.0));

    const auto aff = ValuationSpec::affine(2.0, 0.5);
    CHECK(aff.eval(0.25) == doctest::Approx(1.0));
    CHECK(aff.integral(0.0, 1.0) == doctest::Approx(1.5));

    const auto c = ValuationSpec::constant(3.0);
    CHECK(c.eval(0.9) == 3.0);
    CHECK(c.derivative(0.9) == 0.0);

    const auto ed = ValuationSpec::exp_decay(2.0, 1.0);
    CHECK(ed.domain() == Domain::HalfLine);
    CHECK(ed.eval(1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
    CHECK(ed.integral(0.0, ed.upper()) == doctest::Approx(2.0));

    const auto eg = ValuationSpec::exp_growth(1.0);
    CHECK(eg.eval(1.0) == doctest::Approx(std::exp(1.0) - 1.0));

    const auto sat = ValuationSpec::saturating(10.0);
    CHECK(sat.eval(0.1) == doctest::Approx(1.0 - std::exp(-1.0)));
}

TEST_CASE("mirror reflects and scale multiplies") {
    const auto m = ValuationSpec::mirror_of(ValuationSpec::monomial(1.0));
    CHECK(m.is_mirror());
    CHECK(m.eval(0.3) == doctest::Approx(0.7));
    CHECK(m.derivative(0.3) == doctest::Approx(-1.0));
    CHECK(m.integral(0.0, 0.5) == doctest::Approx(0.375));

    const auto s = ValuationSpec::monomial(1.0).scaled(4.0);
    CHECK(s.scale() == 4.0);
    CHECK(s.eval(0.5) == doctest::Approx(2.0));
    CHECK(s.integral(0.0, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("eta is the absolute log-derivative") {
    CHECK(eta(ValuationSpec::monomial(3.0), 0.5) == doctest::Approx(6.0));
    CHECK(eta(ValuationSpec::exp_decay(1.0, 2.0), 0.7) == doctest::Approx(2.0));
    CHECK(eta(ValuationSpec::mirror_of(ValuationSpec::monomial(1.0)), 0.75) == doctest::Approx(4.0));
    CHECK_THROWS_AS(eta(ValuationSpec::monomial(1.0), 0.0), Error);
}

TEST_CASE("pair validation") {
    SUBCASE("decreasing ratio is rejected") {
        const auto up = ValuationSpec::monomial(1.0);
        const auto down = ValuationSpec::mirror_of(up);
        try {
            AdvertiserPair bad(down, up);
            FAIL("accepted a decreasing v1/v2");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DomainError);
        }
    }
    SUBCASE("domains must agree") {
        CHECK_THROWS_AS(AdvertiserPair(ValuationSpec::monomial(1.0), ValuationSpec::exp_decay(1.0, 1.0)),
                        Error);
    }
    SUBCASE("non-positive multipliers") {
        const AdvertiserPair p(ValuationSpec::monomial(1.0),
                               ValuationSpec::mirror_of(ValuationSpec::monomial(1.0)));
        CHECK_THROWS_AS((void)p.threshold(0.0, 1.0), Error);
    }
}

TEST_CASE("efficient threshold and elasticity of the linear mirror") {
    const AdvertiserPair p(ValuationSpec::monomial(1.0),
                           ValuationSpec::mirror_of(ValuationSpec::monomial(1.0)));
    CHECK(p.is_structural_mirror());
    CHECK(efficient_threshold(p) == doctest::Approx(0.5));
    CHECK(p.head(1, 0.5) == doctest::Approx(0.125));
    CHECK(p.tail(1, 0.5) == doctest::Approx(0.375));
    CHECK(elasticity(p, 1, 0.5) == doctest::Approx(4.0));
    CHECK(elasticity(p, 2, 0.5) == doctest::Approx(4.0));
}

TEST_CASE("no interior crossing") {
    const AdvertiserPair p(ValuationSpec::constant(2.0), ValuationSpec::constant(1.0));
    try {
        (void)efficient_threshold(p);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoInteriorCrossing);
    }
}

TEST_CASE("property: linear-mirror threshold is mu2 / (mu1 + mu2)") {
    const AdvertiserPair p(ValuationSpec::monomial(1.0),
                           ValuationSpec::mirror_of(ValuationSpec::monomial(1.0)));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> logmu(-3.0, 3.0);
    for (int k = 0; k < 200; ++k) {
        const double m1 = std::exp(logmu(rng));
        const double m2 = std::exp(logmu(rng));
        CHECK(p.threshold(m1, m2) == doctest::Approx(m2 / (m1 + m2)).epsilon(1e-10));
    }
}

TEST_CASE("property: closed-form integrals agree with quadrature") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> par(0.2, 4.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double p = par(rng);
        ValuationSpec v = ValuationSpec::monomial(p);
        switch (k % 5) {
            case 1: v = ValuationSpec::exp_growth(p); break;
            case 2: v = ValuationSpec::saturating(p); break;
            case 3: v = ValuationSpec::affine(p, 0.5); break;
            case 4: v = ValuationSpec::mirror_of(ValuationSpec::monomial(p)); break;
            default: break;
        }
        double a = unit(rng), b = unit(rng);
        if (a > b) std::swap(a, b);
        const double quad = numerics::integrate([&](double q) { return v.eval(q); }, a, b);
        CHECK(v.integral(a, b) == doctest::Approx(quad).epsilon(1e-8));
    }
}
