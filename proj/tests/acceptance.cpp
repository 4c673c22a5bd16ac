// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance            all criteria
//   acceptance 3 7        selected criteria
//
// Exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bidwars/casestudies.hpp"
#include "bidwars/game.hpp"
#include "bidwars/metrics.hpp"
#include "bidwars/numerics.hpp"
#include "bidwars/oracle.hpp"
#include "bidwars/subgame.hpp"
#include "bidwars/valuation.hpp"

using namespace bidwars;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }
};

std::string str(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

const AuctionProfile FF{{Format::FPA, Format::FPA}};
const AuctionProfile SS{{Format::SPA, Format::SPA}};
const AuctionProfile FS{{Format::FPA, Format::SPA}};
const AuctionProfile SF{{Format::SPA, Format::FPA}};

AdvertiserPair mirrored(const ValuationSpec& v) { return {v, ValuationSpec::mirror_of(v)}; }

bool has_profile(const EquilibriumReport& r, const AuctionProfile& p) {
    return std::any_of(r.pure_ne.begin(), r.pure_ne.end(),
                       [&](const AuctionProfile& q) { return q.formats == p.formats; });
}

EquilibriumReport two_platform_game(const AdvertiserPair& pair) {
    const auto m = build_matrix(pair, MarketShares::full_copy(2), BiddingMode::PerPlatform, {}, 1);
    return find_equilibria(m);
}

// Runs jobs on the default worker count; results keep input order.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& job) {
    std::vector<T> out(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) out[i] = job(i);
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(default_threads(), n));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return out;
}

std::vector<double> lincon_alphas() {
    std::vector<double> a;
    for (int k = 1; k <= 20; ++k) a.push_back(2.0 + 2.0 * k / 21.0);
    return a;
}

std::vector<double> exp_alphas() {
    std::vector<double> a;
    for (int k = 1; k <= 20; ++k) a.push_back(0.25 + k / 84.0);
    return a;
}

// ---------------------------------------------------------------- 1

Outcome mirrored_linear_table() {
    Outcome o;
    const auto pair = mirrored(ValuationSpec::monomial(1.0));
    const auto m = build_matrix(pair, MarketShares::full_copy(2), BiddingMode::PerPlatform, {}, 1);
    const double tol = 1e-8;
    struct Row {
        AuctionProfile p;
        double r1, r2, mu1, mu2;
    };
    const Row rows[] = {{FF, 0.75, 0.75, 1.0, 1.0},
                        {SF, 6.0 / 7.0, 9.0 / 14.0, 24.0 / 7.0, 6.0 / 7.0},
                        {FS, 9.0 / 14.0, 6.0 / 7.0, 6.0 / 7.0, 24.0 / 7.0},
                        {SS, 0.75, 0.75, 3.0, 3.0}};
    for (const auto& r : rows) {
        const auto& cell = m.at(r.p);
        if (!cell.solved()) {
            o.require(false, r.p.describe() + " unsolved: " + cell.error_message);
            continue;
        }
        const auto& s = *cell.solution;
        o.require(close(s.revenue[0], r.r1, tol) && close(s.revenue[1], r.r2, tol),
                  r.p.describe() + " payoffs (" + str(s.revenue[0]) + ", " + str(s.revenue[1]) + ")");
        for (int a = 0; a < 2; ++a) {
            o.require(close(s.multipliers[a][0], r.mu1, tol) && close(s.multipliers[a][1], r.mu2, tol),
                      r.p.describe() + " multipliers of advertiser " + std::to_string(a + 1));
        }
    }
    const auto eq = find_equilibria(m);
    o.require(eq.pure_ne.size() == 1 && has_profile(eq, SS), "pure NE is not uniquely (SPA,SPA)");
    return o;
}

// ---------------------------------------------------------------- 2

Outcome q_test_matches_payoffs() {
    Outcome o;
    struct Case {
        std::string name;
        ValuationSpec v;
    };
    std::vector<Case> cases;
    for (double a : {1.0, 1.5, 2.0, 3.0, 5.0}) cases.push_back({"q^" + str(a), ValuationSpec::monomial(a)});
    for (double a : {0.5, 1.0, 2.0}) {
        cases.push_back({"e^(" + str(a) + "q)-1", ValuationSpec::exp_growth(a)});
    }
    for (double a : {0.1, 0.25, 0.5, 0.75, 1.0}) {
        cases.push_back({"crossing slope " + str(a), ValuationSpec::affine(a, (1.0 - a) / 2.0)});
    }
    for (double b : {0.0, 0.1, 0.5, 1.0, 2.0}) {
        cases.push_back({"q+" + str(b), ValuationSpec::affine(1.0, b)});
    }
    cases.push_back({"1-e^(-10q)", ValuationSpec::saturating(10.0)});

    int agree = 0;
    for (const auto& c : cases) {
        const auto pair = mirrored(c.v);
        const double q = q_parameter(pair);
        const auto eq = two_platform_game(pair);
        Dominance predicted = Dominance::Degenerate;
        if (q > 1.0 + 1e-9) predicted = Dominance::SPADominant;
        if (q < 1.0 - 1e-9) predicted = Dominance::FPADominant;
        const bool ok = predicted == eq.dominance;
        agree += ok;
        o.require(ok, c.name + ": Q=" + str(q) + " but payoffs say " + std::string(to_string(eq.dominance)));
    }
    o.notes.insert(o.notes.begin(), std::to_string(agree) + "/" + std::to_string(cases.size()) +
                                        " families agree");
    return o;
}

// ---------------------------------------------------------------- 3

Outcome market_share_theorem() {
    Outcome o;
    const auto pair = mirrored(ValuationSpec::monomial(1.0));
    const std::vector<std::vector<double>> shares = {
        {0.5, 0.5}, {0.7, 0.3}, {0.2, 0.3, 0.5}, {0.1, 0.2, 0.3, 0.4}};
    int checked = 0;
    for (const auto& g : shares) {
        for (auto norm : {Normalization::Scaled, Normalization::FullCopy}) {
            MarketShares ms{g, norm};
            const auto r = market_share_dominance(pair, ms);
            const auto m = build_matrix(pair, ms, BiddingMode::PerPlatform);
            const auto eq = find_equilibria(m);
            checked += r.profiles_checked;
            const std::string tag = std::to_string(g.size()) + " platforms " +
                                    std::string(to_string(norm));
            o.require(r.dominance == Dominance::SPADominant, tag + ": Q-test says " +
                                                                 std::string(to_string(r.dominance)));
            o.require(r.violations == 0, tag + ": " + std::to_string(r.violations) + " violations");
            o.require(eq.dominance == Dominance::SPADominant,
                      tag + ": payoff comparison says " + std::string(to_string(eq.dominance)));
        }
    }
    o.notes.insert(o.notes.begin(), std::to_string(checked) + " profiles checked");
    return o;
}

// ---------------------------------------------------------------- 4

enum class Band { AsymmetricNE, SPA, BothDiagonal, FPA };

Outcome linear_vs_constant() {
    Outcome o;
    const auto th = lincon_thresholds();
    o.require(close(th.alpha_1, 2.1822, 1e-3), "alpha_1 = " + str(th.alpha_1));
    o.require(close(th.alpha_2, 3.52753, 1e-3), "alpha_2 = " + str(th.alpha_2));
    o.require(close(th.alpha_3, 3.5822, 1e-3), "alpha_3 = " + str(th.alpha_3));

    const double round_trip = lincon_solve(2.9126).q_F;
    o.require(close(round_trip, 0.4, 1e-3), "q_F(2.9126) = " + str(round_trip));

    auto band_of = [&](double a) {
        if (a < th.alpha_1) return Band::AsymmetricNE;
        if (a < th.alpha_2) return Band::SPA;
        if (a < th.alpha_3) return Band::BothDiagonal;
        return Band::FPA;
    };

    auto alphas = lincon_alphas();
    // Make sure every band is visited.
    for (double a : {2.1, 3.55}) alphas.push_back(a);
    std::sort(alphas.begin(), alphas.end());

    double prev_qf = std::numeric_limits<double>::infinity();
    int bands_seen = 0;
    bool seen[4] = {false, false, false, false};
    for (double a : alphas) {
        const auto cs = lincon_solve(a);
        const auto pair = lincon_pair(a);
        const auto ff = solve_per_platform(pair, FF, MarketShares::full_copy(2));
        const auto ss = solve_per_platform(pair, SS, MarketShares::full_copy(2));
        const auto fs = solve_per_platform(pair, FS, MarketShares::full_copy(2));
        const double want_ff = (a * a + 1.0) / (2.0 * a);
        const double want_ss = 3.0 - 4.0 / a;
        for (int j = 0; j < 2; ++j) {
            o.require(close(ff.revenue[j], want_ff, 1e-7), "FPA-FPA revenue at " + str(a));
            o.require(close(ss.revenue[j], want_ss, 1e-7), "SPA-SPA revenue at " + str(a));
        }
        o.require(close(fs.revenue[0], cs.rev_fpa, 1e-7) && close(fs.revenue[1], cs.rev_spa, 1e-7),
                  "FPA-SPA revenues at " + str(a));
        o.require(close(fs.thresholds[0], cs.q_F, 1e-7), "q_F at " + str(a));
        o.require(cs.q_F < prev_qf, "q_F not decreasing at " + str(a));
        prev_qf = cs.q_F;

        const auto band = band_of(a);
        const bool near_edge = std::min({std::abs(a - th.alpha_1), std::abs(a - th.alpha_2),
                                         std::abs(a - th.alpha_3)}) < 1e-3;
        if (near_edge) continue;
        const auto eq = two_platform_game(pair);
        bool ok = false;
        switch (band) {
            case Band::AsymmetricNE:
                ok = eq.pure_ne.size() == 2 && has_profile(eq, FS) && has_profile(eq, SF) &&
                     eq.mixed_ne_2x2.has_value();
                break;
            case Band::SPA:
                ok = eq.dominance == Dominance::SPADominant && eq.pure_ne.size() == 1 &&
                     has_profile(eq, SS);
                break;
            case Band::BothDiagonal:
                ok = eq.pure_ne.size() == 2 && has_profile(eq, FF) && has_profile(eq, SS) &&
                     eq.mixed_ne_2x2.has_value();
                break;
            case Band::FPA:
                ok = eq.dominance == Dominance::FPADominant && eq.pure_ne.size() == 1 &&
                     has_profile(eq, FF);
                break;
        }
        const int b = static_cast<int>(band);
        if (ok && !seen[b]) {
            seen[b] = true;
            ++bands_seen;
        }
        o.require(ok, "equilibria at alpha " + str(a) + " do not match its band");
    }
    o.require(bands_seen == 4, "only " + std::to_string(bands_seen) + " bands reproduced");
    o.notes.insert(o.notes.begin(), "alpha_1..3 = " + str(th.alpha_1) + ", " + str(th.alpha_2) +
                                        ", " + str(th.alpha_3));
    return o;
}

// ---------------------------------------------------------------- 5

Outcome exponential_family() {
    Outcome o;
    double worst_residual = 0.0;
    for (double a : exp_alphas()) {
        const auto pair = exp_pair(a);
        const auto eq = two_platform_game(pair);
        o.require(eq.dominance == Dominance::SPADominant,
                  "alpha " + str(a) + ": " + std::string(to_string(eq.dominance)));
        const auto fs = solve_per_platform(pair, FS, MarketShares::full_copy(2));
        const double y = fs.multipliers[0][0], x = fs.multipliers[0][1];
        const double w = fs.multipliers[1][0], z = fs.multipliers[1][1];
        for (double r : exp_system_residuals(a, x, y, z, w)) {
            worst_residual = std::max(worst_residual, std::abs(r));
        }
    }
    o.require(worst_residual <= 1e-9, "FPA-SPA system residual " + str(worst_residual));

    std::vector<double> ts;
    for (int k = 1; k <= 20; ++k) ts.push_back(0.36 + (0.609 - 0.36) * k / 21.0);
    for (const auto& c : exp_dominance_certificates(ts)) {
        o.require(c.holds(), "certificate fails at t=" + str(c.t));
    }

    const auto pair = exp_pair(1.0 / 3.0);
    const auto ff = solve_per_platform(pair, FF, MarketShares::full_copy(2));
    const auto ss = solve_per_platform(pair, SS, MarketShares::full_copy(2));
    for (int j = 0; j < 2; ++j) {
        o.require(close(ff.revenue[j], 5.0 / 9.0, 1e-9), "FPA-FPA revenue " + str(ff.revenue[j]));
        o.require(close(ss.revenue[j], 5.0 / 9.0, 1e-9), "SPA-SPA revenue " + str(ss.revenue[j]));
    }
    o.notes.insert(o.notes.begin(), "max residual " + str(worst_residual));
    return o;
}

// ---------------------------------------------------------------- 6

Outcome constrained_modes() {
    Outcome o;
    const std::vector<AdvertiserPair> pairs = {
        mirrored(ValuationSpec::monomial(1.0)), mirrored(ValuationSpec::monomial(2.0)),
        mirrored(ValuationSpec::exp_growth(1.0)), lincon_pair(3.0), exp_pair(1.0 / 3.0)};
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t n : {2u, 3u}) {
            const auto shares = MarketShares::full_copy(n);
            const AuctionProfile all_fpa{std::vector<Format>(n, Format::FPA)};
            const auto s = solve_uniform_mode(pairs[i], all_fpa, shares);
            const double w = liquid_welfare(pairs[i], shares);
            o.require(close(s.total_revenue(), w, 1e-9),
                      "uniform all-FPA pair " + std::to_string(i) + ": " + str(s.total_revenue()) +
                          " vs W* " + str(w));
        }
    }

    struct Instance {
        ValuationSpec strategic;
        std::vector<ValuationSpec> statics;
    };
    const std::vector<Instance> instances = {
        {ValuationSpec::monomial(1.0), {ValuationSpec::constant(0.5), ValuationSpec::monomial(2.0)}},
        {ValuationSpec::constant(1.0),
         {ValuationSpec::monomial(1.0), ValuationSpec::mirror_of(ValuationSpec::monomial(1.0))}},
        {ValuationSpec::monomial(2.0), {ValuationSpec::constant(0.3), ValuationSpec::constant(0.6)}},
        {ValuationSpec::saturating(5.0), {ValuationSpec::monomial(1.0), ValuationSpec::monomial(3.0)}},
        {ValuationSpec::affine(0.5, 0.5),
         {ValuationSpec::mirror_of(ValuationSpec::monomial(1.0)), ValuationSpec::constant(0.7)}},
    };
    const auto shares = MarketShares::full_copy(2);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& in = instances[i];
        std::vector<SubgameSolution> sols;
        for (const auto& p : {FF, SF, FS, SS}) {
            sols.push_back(solve_single_strategic(in.strategic, in.statics, p, shares));
        }
        // Index k: bit j set when platform j runs SPA.
        for (int j = 0; j < 2; ++j) {
            for (int other = 0; other < 2; ++other) {
                const int k_fpa = other << (1 - j);
                const int k_spa = k_fpa | (1 << j);
                const double r_fpa = sols[k_fpa].revenue[j];
                const double r_spa = sols[k_spa].revenue[j];
                o.require(r_fpa >= r_spa - 1e-9, "instance " + std::to_string(i) + " platform " +
                                                     std::to_string(j + 1) + ": FPA " + str(r_fpa) +
                                                     " < SPA " + str(r_spa));
            }
        }
        // All-FPA: compare the solver's multipliers with 1 and record what
        // bidding 1 everywhere would have been worth.
        double at_one = 0.0;
        for (const auto& st : in.statics) {
            const auto gap = [&](double q) { return in.strategic.eval(q) - st.eval(q); };
            auto cuts = numerics::find_all_roots(gap, 0.0, 1.0, 400);
            cuts.insert(cuts.begin(), 0.0);
            cuts.push_back(1.0);
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                if (gap(0.5 * (cuts[k] + cuts[k + 1])) > 0.0) {
                    at_one += in.strategic.integral(cuts[k], cuts[k + 1]);
                }
            }
        }
        const double at_opt = sols[0].value[0];
        const bool ones = close(sols[0].multipliers[0][0], 1.0, 1e-9) &&
                          close(sols[0].multipliers[0][1], 1.0, 1e-9);
        o.require(at_opt >= at_one - 1e-7, "instance " + std::to_string(i) +
                                               ": solver value below the all-ones value");
        o.require(sols[0].spend[0] <= sols[0].value[0] + 1e-9,
                  "instance " + std::to_string(i) + ": solver point breaks the target");
        o.require(ones, "instance " + std::to_string(i) + " all-FPA multipliers (" +
                            str(sols[0].multipliers[0][0]) + ", " + str(sols[0].multipliers[0][1]) +
                            "), value " + str(at_opt) + " vs " + str(at_one) + " at (1, 1)");
    }
    return o;
}

// ---------------------------------------------------------------- 7

struct OracleScenario {
    std::string name;
    AdvertiserPair pair;
    AuctionProfile profile;
};

Outcome oracle_equivalence() {
    Outcome o;
    std::vector<OracleScenario> sc;
    const auto lin = mirrored(ValuationSpec::monomial(1.0));
    for (const auto& p : {FF, SF, FS, SS}) sc.push_back({"mirror-linear " + p.describe(), lin, p});
    for (double a : lincon_alphas()) {
        for (const auto& p : {FF, SS, FS}) sc.push_back({"lincon " + str(a) + " " + p.describe(), lincon_pair(a), p});
    }
    for (double a : exp_alphas()) {
        for (const auto& p : {FF, SS, FS}) sc.push_back({"exponential " + str(a) + " " + p.describe(), exp_pair(a), p});
    }

    struct Result {
        bool ok = false;
        std::string why;
        double worst_threshold = 0.0;
        double worst_revenue = 0.0;
    };
    const auto results = parallel_map<Result>(sc.size(), [&](std::size_t i) {
        Result r;
        try {
            const auto analytic = solve_per_platform(sc[i].pair, sc[i].profile, MarketShares::full_copy(2));
            const auto oracle = equilibrium_by_dynamics(sc[i].pair, sc[i].profile);
            const auto checks = compare_with_oracle(analytic, oracle);
            r.ok = all_pass(checks);
            for (const auto& c : checks) {
                if (c.name.find("threshold") != std::string::npos) {
                    r.worst_threshold = std::max(r.worst_threshold, c.delta);
                } else {
                    r.worst_revenue = std::max(r.worst_revenue, c.delta / std::abs(c.analytic));
                }
                if (!c.pass && r.why.empty()) {
                    r.why = c.name + " analytic " + str(c.analytic) + " oracle " + str(c.oracle);
                }
            }
        } catch (const Error& e) {
            r.why = std::string(to_string(e.kind())) + ": " + e.what();
        }
        return r;
    });

    int passed = 0;
    std::vector<std::string> failing;
    for (std::size_t i = 0; i < sc.size(); ++i) {
        if (results[i].ok) {
            ++passed;
        } else {
            failing.push_back(sc[i].name + " (" + results[i].why + ")");
        }
    }
    o.pass = failing.empty();
    o.notes.push_back(std::to_string(passed) + "/" + std::to_string(sc.size()) + " scenarios match");
    const std::size_t shown = std::min<std::size_t>(failing.size(), 40);
    for (std::size_t i = 0; i < shown; ++i) o.notes.push_back(failing[i]);
    if (failing.size() > shown) o.notes.push_back("... " + std::to_string(failing.size() - shown) + " more");
    return o;
}

// ---------------------------------------------------------------- 8

struct RandomCase {
    std::string family;
    std::string name;
    AdvertiserPair pair;
    bool mirrored = false;
};

RandomCase draw_case(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind(0, 6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    switch (kind(rng)) {
        case 0: {
            const double a = 0.5 + 4.5 * u(rng);
            return {"mirror q^a", "mirror q^" + str(a), mirrored(ValuationSpec::monomial(a)), true};
        }
        case 1: {
            const double a = 0.2 + 2.8 * u(rng);
            return {"mirror e^(aq)-1", "mirror e^(" + str(a) + "q)-1", mirrored(ValuationSpec::exp_growth(a)), true};
        }
        case 2: {
            const double a = 0.05 + 0.95 * u(rng);
            return {"mirror fixed crossing", "mirror crossing " + str(a), mirrored(ValuationSpec::affine(a, (1.0 - a) / 2.0)), true};
        }
        case 3: {
            const double b = 2.0 * u(rng);
            return {"mirror fixed slope", "mirror q+" + str(b), mirrored(ValuationSpec::affine(1.0, b)), true};
        }
        case 4: {
            const double r = 0.5 + 9.5 * u(rng);
            return {"mirror saturating", "mirror 1-e^(-" + str(r) + "q)", mirrored(ValuationSpec::saturating(r)), true};
        }
        case 5: {
            const double a = 2.02 + 1.96 * u(rng);
            return {"lincon", "lincon " + str(a), lincon_pair(a), false};
        }
        default: {
            const double a = 0.26 + 0.23 * u(rng);
            return {"exponential", "exponential " + str(a), exp_pair(a), false};
        }
    }
}

Outcome structural_invariants() {
    Outcome o;
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> platform_count(2, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n_cases = 240;
    int solved = 0;
    std::map<std::string, std::pair<int, int>> tally;  // family -> (cases, failing cases)
    double worst_target = 0.0, worst_mc = 0.0, worst_welfare = -1.0, worst_ff = 0.0,
           worst_scale = 0.0, worst_mirror = 0.0;
    for (int c = 0; c < n_cases; ++c) {
        const auto rc = draw_case(rng);
        const std::size_t notes_before = o.notes.size();
        const std::size_t n = static_cast<std::size_t>(platform_count(rng));
        std::vector<double> g(n);
        double sum = 0.0;
        for (auto& x : g) sum += (x = 0.2 + u(rng));
        for (auto& x : g) x /= sum;
        const MarketShares shares{g, u(rng) < 0.5 ? Normalization::Scaled : Normalization::FullCopy};
        AuctionProfile profile;
        for (std::size_t j = 0; j < n; ++j) profile.formats.push_back(u(rng) < 0.5 ? Format::FPA : Format::SPA);
        const double wstar = liquid_welfare(rc.pair, shares);
        try {
            const auto s = solve_per_platform(rc.pair, profile, shares);
            const auto d = diagnose(rc.pair, s);
            worst_target = std::max(worst_target, d.target_gap);
            worst_mc = std::max(worst_mc, d.mc_spread);
            worst_welfare = std::max(worst_welfare, s.total_revenue() - wstar);
            o.require(d.target_gap <= 1e-8, rc.name + " " + profile.describe() + ": target gap " + str(d.target_gap));
            o.require(d.mc_spread <= 1e-6, rc.name + " " + profile.describe() + ": MC spread " + str(d.mc_spread));
            o.require(s.total_revenue() <= wstar + 1e-8, rc.name + ": revenue above W*");
            if (rc.mirrored) {
                for (std::size_t j = 0; j < n; ++j) {
                    const double gap = std::abs(s.multipliers[0][j] - s.multipliers[1][j]) /
                                       std::max(1.0, std::abs(s.multipliers[0][j]));
                    worst_mirror = std::max(worst_mirror, gap);
                    o.require(gap <= 1e-8, rc.name + ": unequal multipliers on a mirrored pair");
                }
            }
            ++solved;
        } catch (const Error& e) {
            o.require(false, rc.name + " " + profile.describe() + ": " + std::string(to_string(e.kind())));
        }

        const AuctionProfile all_fpa{std::vector<Format>(n, Format::FPA)};
        const auto ff = solve_per_platform(rc.pair, all_fpa, shares);
        worst_ff = std::max(worst_ff, std::abs(ff.total_revenue() - wstar));
        o.require(close(ff.total_revenue(), wstar, 1e-8), rc.name + ": all-FPA revenue differs from W*");

        const double k = std::exp(4.0 * u(rng) - 2.0);
        const AdvertiserPair scaled(rc.pair.v1().scaled(k), rc.pair.v2().scaled(k));
        const auto m0 = market_metrics(rc.pair, shares);
        const auto m1 = market_metrics(scaled, shares);
        double gap = std::max({std::abs(m0.C_A - m1.C_A), std::abs(m0.E1_at_qeff - m1.E1_at_qeff),
                               std::abs(m0.E2_at_qeff - m1.E2_at_qeff)});
        if (m0.Q && m1.Q) gap = std::max(gap, std::abs(*m0.Q - *m1.Q));
        o.require(m0.Q.has_value() == m1.Q.has_value(), rc.name + ": Q defined for one scale only");
        worst_scale = std::max(worst_scale, gap);
        o.require(gap <= 1e-12, rc.name + ": scale changes metrics by " + str(gap));

        auto& t = tally[rc.family];
        ++t.first;
        t.second += o.notes.size() > notes_before;
    }
    std::string families = "failing cases by family:";
    for (const auto& [name, t] : tally) {
        families += " " + name + " " + std::to_string(t.second) + "/" + std::to_string(t.first) + ";";
    }
    if (o.notes.size() > 12) {
        const auto extra = o.notes.size() - 12;
        o.notes.resize(12);
        o.notes.push_back("... " + std::to_string(extra) + " more");
    }
    std::ostringstream s;
    s << n_cases << " cases (" << solved << " solved); worst target " << str(worst_target) << ", MC "
      << str(worst_mc) << ", revenue-W* " << str(worst_welfare) << ", FPA-FPA vs W* " << str(worst_ff)
      << ", scale " << str(worst_scale) << ", mirror " << str(worst_mirror);
    o.notes.insert(o.notes.begin(), families);
    o.notes.insert(o.notes.begin(), s.str());
    return o;
}

struct Criterion {
    int id;
    const char* title;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "mirrored linear payoff table", mirrored_linear_table},
    {2, "Q-test agrees with payoff comparison", q_test_matches_payoffs},
    {3, "SPA dominant under any market shares", market_share_theorem},
    {4, "linear versus constant", linear_vs_constant},
    {5, "exponential family", exponential_family},
    {6, "constrained bidding modes", constrained_modes},
    {7, "oracle equivalence", oracle_equivalence},
    {8, "structural invariants", structural_invariants},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    bool all_ok = true;
    for (const auto& c : kCriteria) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.notes.push_back(std::string("uncaught: ") + e.what());
        }
        all_ok = all_ok && o.pass;
        std::printf("criterion %d: %s  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title);
        for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
    }
    return all_ok ? 0 : 1;
}
