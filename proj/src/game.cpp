#include "bidwars/game.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "bidwars/metrics.hpp"

namespace bidwars {

namespace {

constexpr std::size_t kMaxPlatforms = 12;

AuctionProfile profile_of(std::size_t index, std::size_t n) {
    AuctionProfile p;
    for (std::size_t j = 0; j < n; ++j) {
        p.formats.push_back(((index >> j) & 1U) != 0 ? Format::SPA : Format::FPA);
    }
    return p;
}

double payoff(const PayoffMatrix& m, std::size_t index, std::size_t platform) {
    return m.cells[index].revenue(platform);
}

}  // namespace

std::string_view to_string(Dominance d) noexcept {
    switch (d) {
        case Dominance::SPADominant: return "SPADominant";
        case Dominance::FPADominant: return "FPADominant";
        case Dominance::Degenerate: return "Degenerate";
        case Dominance::None: return "None";
    }
    return "None";
}

std::string_view to_string(ClassificationBasis b) noexcept {
    return b == ClassificationBasis::QTest ? "QTest" : "PayoffComparison";
}

double PayoffCell::revenue(std::size_t platform) const {
    if (!solution) {
        throw Error(ErrorKind::IncompleteMatrix, "cell " + profile.describe() + " has no solution");
    }
    return solution->revenue.at(platform);
}

std::size_t PayoffMatrix::index_of(const AuctionProfile& profile) {
    std::size_t k = 0;
    for (std::size_t j = 0; j < profile.size(); ++j) {
        if (profile.formats[j] == Format::SPA) k |= std::size_t{1} << j;
    }
    return k;
}

const PayoffCell& PayoffMatrix::at(const AuctionProfile& profile) const {
    return cells.at(index_of(profile));
}

bool PayoffMatrix::complete() const {
    return !cells.empty() &&
           std::all_of(cells.begin(), cells.end(), [](const PayoffCell& c) { return c.solved(); });
}

unsigned default_threads() {
    if (const char* env = std::getenv("BIDWARS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

PayoffMatrix build_matrix(std::size_t n_platforms, const ProfileSolver& solver, unsigned threads) {
    if (n_platforms == 0 || n_platforms > kMaxPlatforms) {
        throw Error(ErrorKind::RangeError, "platform count must lie in [1, 12]");
    }
    PayoffMatrix m;
    m.n_platforms = n_platforms;
    const std::size_t total = std::size_t{1} << n_platforms;
    m.cells.resize(total);
    for (std::size_t k = 0; k < total; ++k) m.cells[k].profile = profile_of(k, n_platforms);

    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t k = next++; k < total; k = next++) {
            PayoffCell& cell = m.cells[k];
            try {
                cell.solution = solver(cell.profile);
            } catch (const Error& e) {
                cell.error = e.kind();
                cell.error_message = e.what();
            }
        }
    };
    if (threads == 0) threads = default_threads();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    const auto solved = std::find_if(m.cells.begin(), m.cells.end(),
                                     [](const PayoffCell& c) { return c.solved(); });
    if (solved == m.cells.end()) {
        throw Error(*m.cells.front().error, m.cells.front().error_message);
    }
    return m;
}

PayoffMatrix build_matrix(const AdvertiserPair& pair, const MarketShares& shares,
                          BiddingMode mode, const numerics::NumericsConfig& cfg,
                          unsigned threads) {
    shares.validate();
    ProfileSolver solver;
    switch (mode) {
        case BiddingMode::PerPlatform:
            solver = [&](const AuctionProfile& p) { return solve_per_platform(pair, p, shares, cfg); };
            break;
        case BiddingMode::Uniform:
            solver = [&](const AuctionProfile& p) { return solve_uniform_mode(pair, p, shares, cfg); };
            break;
        case BiddingMode::SingleStrategic:
            throw Error(ErrorKind::ModeError,
                        "single-strategic matrices need static curves; pass a profile solver");
    }
    return build_matrix(shares.size(), solver, threads);
}

EquilibriumReport find_equilibria(const PayoffMatrix& m, double tol) {
    if (!m.complete()) throw Error(ErrorKind::IncompleteMatrix, "payoff matrix has unsolved cells");
    const std::size_t n = m.n_platforms;
    const std::size_t total = m.cells.size();
    EquilibriumReport rep;
    rep.classification_basis = ClassificationBasis::PayoffComparison;
    rep.profiles_checked = static_cast<int>(total);

    std::vector<bool> strict(total, true);
    bool spa_weak = true;
    bool fpa_weak = true;
    bool any_strict = false;
    for (std::size_t k = 0; k < total; ++k) {
        bool is_ne = true;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t other = k ^ (std::size_t{1} << j);
            const double own = payoff(m, k, j);
            const double dev = payoff(m, other, j);
            if (dev > own + tol) is_ne = false;
            if (!(own > dev + tol)) strict[k] = false;
            if (((k >> j) & 1U) != 0) {
                // own is SPA, dev is FPA
                if (own < dev - tol) spa_weak = false;
                if (dev < own - tol) fpa_weak = false;
                if (std::abs(own - dev) > tol) any_strict = true;
            }
        }
        if (is_ne) rep.pure_ne.push_back(m.cells[k].profile);
        else strict[k] = false;
    }

    bool constant = true;
    for (std::size_t j = 0; j < n && constant; ++j) {
        const double ref = payoff(m, 0, j);
        for (std::size_t k = 1; k < total; ++k) {
            if (std::abs(payoff(m, k, j) - ref) > tol) {
                constant = false;
                break;
            }
        }
    }
    if (constant) {
        rep.dominance = Dominance::Degenerate;
    } else if (spa_weak && any_strict) {
        rep.dominance = Dominance::SPADominant;
    } else if (fpa_weak && any_strict) {
        rep.dominance = Dominance::FPADominant;
    }

    if (n == 2 && ((strict[0] && strict[3]) || (strict[1] && strict[2]))) {
        // Index: bit 0 = platform 1 SPA, bit 1 = platform 2 SPA.
        const auto r = [&](std::size_t k, std::size_t j) { return payoff(m, k, j); };
        const double r2FF = r(0, 1), r2SF = r(1, 1), r2FS = r(2, 1), r2SS = r(3, 1);
        const double r1FF = r(0, 0), r1SF = r(1, 0), r1FS = r(2, 0), r1SS = r(3, 0);
        const double dp = r2SS - r2FS - r2SF + r2FF;
        const double dq = r1SS - r1SF - r1FS + r1FF;
        if (std::abs(dp) > tol && std::abs(dq) > tol) {
            const double p = (r2FF - r2FS) / dp;
            const double q = (r1FF - r1SF) / dq;
            if (p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) rep.mixed_ne_2x2 = MixedEquilibrium{p, q};
        }
    }
    return rep;
}

SubgameSolution mirrored_profile_solution(const AdvertiserPair& pair, const MarketShares& shares,
                                          const AuctionProfile& profile) {
    if (!is_mirrored(pair)) {
        throw Error(ErrorKind::ModeError, "closed-form profile solution needs a mirrored pair");
    }
    shares.validate();
    profile.validate();
    if (profile.size() != shares.size()) {
        throw Error(ErrorKind::ConfigError, "profile and market shares have different lengths");
    }
    const auto w = shares.weights();
    double total = 0.0;
    double spa = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        total += w[j];
        if (profile.formats[j] == Format::SPA) spa += w[j];
    }
    const double gamma = spa / total;
    const double Q = q_parameter(pair);
    const double E = elasticity(pair, 1, efficient_threshold(pair));
    const double muF = 1.0 / (Q * gamma + 1.0 - gamma);
    const double muS = E * muF;
    std::array<std::vector<double>, 2> mu;
    for (Format f : profile.formats) {
        const double m = f == Format::FPA ? muF : muS;
        mu[0].push_back(m);
        mu[1].push_back(m);
    }
    SubgameSolution s = evaluate_profile(pair, profile, w, mu);
    s.elasticity_1 = E;
    s.elasticity_2 = elasticity(pair, 2, efficient_threshold(pair));
    s.flags.push_back("closed_form");
    return s;
}

EquilibriumReport market_share_dominance(const AdvertiserPair& pair, const MarketShares& shares,
                                         const numerics::NumericsConfig& cfg, unsigned threads) {
    shares.validate();
    const std::size_t n = shares.size();
    if (n < 2 || n > kMaxPlatforms) {
        throw Error(ErrorKind::RangeError, "market-share analysis needs between 2 and 12 platforms");
    }
    const double Q = q_parameter(pair);
    const PayoffMatrix m = build_matrix(pair, shares, BiddingMode::PerPlatform, cfg, threads);
    EquilibriumReport rep = find_equilibria(m);
    rep.classification_basis = ClassificationBasis::QTest;
    rep.Q = Q;
    constexpr double kBand = 1e-9;
    if (std::abs(Q - 1.0) <= kBand) {
        rep.dominance = Dominance::Degenerate;
    } else {
        rep.dominance = Q > 1.0 ? Dominance::SPADominant : Dominance::FPADominant;
    }
    rep.violations = 0;
    for (std::size_t k = 0; k < m.cells.size(); ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            if (((k >> j) & 1U) == 0) continue;
            const double gain = payoff(m, k, j) - payoff(m, k ^ (std::size_t{1} << j), j);
            const bool bad = (rep.dominance == Dominance::SPADominant && !(gain > 0.0)) ||
                             (rep.dominance == Dominance::FPADominant && !(gain < 0.0)) ||
                             (rep.dominance == Dominance::Degenerate && std::abs(gain) > 1e-7);
            if (bad) ++rep.violations;
        }
    }
    return rep;
}

}  // namespace bidwars
