#include <doctest.h>

#include "bidwars/errors.hpp"
#include "bidwars/oracle.hpp"

using namespace bidwars;

namespace {

AdvertiserPair linear_mirror() {
    return {ValuationSpec::monomial(1.0), ValuationSpec::mirror_of(ValuationSpec::monomial(1.0))};
}

}  // namespace

TEST_CASE("discrete market at equal bids") {
    const DiscreteMarket m(linear_mirror(), OracleConfig{});
    CHECK(m.cells() == 2000);
    const auto f = m.run(Format::FPA, 1.0, 1.0);
    CHECK(f.threshold == doctest::Approx(0.5));
    CHECK(f.value[0] == doctest::Approx(0.375));
    CHECK(f.value[1] == doctest::Approx(0.375));
    CHECK(f.spend[0] == doctest::Approx(0.375));
    const auto s = m.run(Format::SPA, 1.0, 1.0);
    CHECK(s.spend[0] == doctest::Approx(0.125));
    CHECK(s.revenue == doctest::Approx(0.25));
}

TEST_CASE("crossing inside a cell is split exactly") {
    OracleConfig cfg;
    cfg.n_queries = 100;
    const DiscreteMarket m(linear_mirror(), cfg);
    const auto o = m.run(Format::FPA, 1.3, 1.0);
    CHECK(o.threshold == doctest::Approx(1.0 / 2.3));
    const double q = 1.0 / 2.3;
    CHECK(o.value[0] == doctest::Approx((1.0 - q * q) / 2.0));
}

TEST_CASE("single-platform best response exhausts the ROI constraint") {
    const auto br = best_response(linear_mirror(), AuctionProfile::parse("SPA"), {3.0}, 1);
    REQUIRE(br.size() == 1);
    CHECK(br[0] == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("dynamics reach the analytic equilibrium") {
    const auto pair = linear_mirror();
    const auto prof = AuctionProfile::parse("SPA,FPA");
    const auto o = equilibrium_by_dynamics(pair, prof);
    const auto a = solve_per_platform(pair, prof, MarketShares::full_copy(2));
    const auto checks = compare_with_oracle(a, o);
    CHECK_FALSE(checks.empty());
    for (const auto& c : checks) CHECK_MESSAGE(c.pass, c.name);
    CHECK(all_pass(checks));
}

TEST_CASE("oracle config validation") {
    OracleConfig c;
    c.n_queries = 10;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.damping = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.grid_hi = 5.0;
    CHECK_THROWS_AS(c.validate(), Error);
    CHECK_THROWS_AS(best_response(linear_mirror(), AuctionProfile::parse("SPA,SPA,SPA"),
                                  {1.0, 1.0, 1.0}, 1),
                    Error);
}
