#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bidwars/errors.hpp"
#include "bidwars/subgame.hpp"

namespace bidwars {

enum class Dominance { SPADominant, FPADominant, Degenerate, None };
enum class ClassificationBasis { PayoffComparison, QTest };

std::string_view to_string(Dominance d) noexcept;
std::string_view to_string(ClassificationBasis b) noexcept;

struct PayoffCell {
    AuctionProfile profile;
    std::optional<SubgameSolution> solution;
    std::optional<ErrorKind> error;
    std::string error_message;

    [[nodiscard]] bool solved() const noexcept { return solution.has_value(); }
    [[nodiscard]] double revenue(std::size_t platform) const;
};

/// Payoffs of the platforms' format game. Cell k holds the profile whose
/// platform j runs SPA iff bit j of k is set.
struct PayoffMatrix {
    std::size_t n_platforms = 0;
    std::vector<PayoffCell> cells;

    [[nodiscard]] static std::size_t index_of(const AuctionProfile& profile);
    [[nodiscard]] const PayoffCell& at(const AuctionProfile& profile) const;
    [[nodiscard]] bool complete() const;
};

struct MixedEquilibrium {
    double p_spa_1 = 0.0;  // probability that platform 1 plays SPA
    double p_spa_2 = 0.0;
};

struct EquilibriumReport {
    std::vector<AuctionProfile> pure_ne;
    std::optional<MixedEquilibrium> mixed_ne_2x2;
    Dominance dominance = Dominance::None;
    ClassificationBasis classification_basis = ClassificationBasis::PayoffComparison;
    std::optional<double> Q;
    int profiles_checked = 0;
    int violations = 0;  // deviations disagreeing with the reported dominance
};

using ProfileSolver = std::function<SubgameSolution(const AuctionProfile&)>;

/// Solves every profile of `n_platforms` formats; cells run concurrently on
/// up to `threads` workers (0 picks a default). Per-cell errors are kept in
/// the cell. Throws the first cell's error if no cell could be solved.
PayoffMatrix build_matrix(std::size_t n_platforms, const ProfileSolver& solver,
                          unsigned threads = 0);

PayoffMatrix build_matrix(const AdvertiserPair& pair, const MarketShares& shares,
                          BiddingMode mode, const numerics::NumericsConfig& cfg = {},
                          unsigned threads = 0);

/// Pure equilibria and dominance by payoff comparison; mixed equilibrium for
/// 2x2 games with two strict diagonal or two strict off-diagonal equilibria.
EquilibriumReport find_equilibria(const PayoffMatrix& matrix, double tol = 1e-9);

/// Closed form for mirrored pairs: mu^F = 1 / (Q gamma + 1 - gamma) and
/// mu^S = E mu^F, gamma being the SPA market share.
SubgameSolution mirrored_profile_solution(const AdvertiserPair& pair, const MarketShares& shares,
                                          const AuctionProfile& profile);

/// Q-test classification, cross-checked against every unilateral deviation
/// in all 2^n profiles (n <= 12).
EquilibriumReport market_share_dominance(const AdvertiserPair& pair, const MarketShares& shares,
                                         const numerics::NumericsConfig& cfg = {},
                                         unsigned threads = 0);

/// Worker count from BIDWARS_THREADS, else hardware concurrency.
unsigned default_threads();

}  // namespace bidwars
