#pragma once

#include <array>
#include <string>
#include <vector>

#include "bidwars/subgame.hpp"
#include "bidwars/valuation.hpp"

namespace bidwars {

struct OracleConfig {
    int n_queries = 2000;
    int grid_points = 400;     // geometric multiplier grid
    double grid_lo = 1e-3;
    double grid_hi = 50.0;
    double damping = 0.5;
    int max_rounds = 500;
    double convergence_tol = 1e-4;
    double half_line_cutoff = 40.0;  // truncation of [0, inf)

    void validate() const;
};

/// The query space cut into n_queries Simpson cells. Each cell is awarded by
/// the bids at its ends; a cell whose ends disagree is split at the crossing,
/// located from point evaluations. Nothing beyond point evaluations of v1
/// and v2 is used.
class DiscreteMarket {
public:
    DiscreteMarket(const AdvertiserPair& pair, const OracleConfig& cfg);

    struct Outcome {
        std::array<double, 2> value{};
        std::array<double, 2> spend{};
        double revenue = 0.0;
        double threshold = 0.0;  // first interpolated crossing, or a domain end
    };

    /// Allocation and payments on one platform of unit weight.
    [[nodiscard]] Outcome run(Format format, double mu1, double mu2) const;
    [[nodiscard]] double upper() const noexcept { return nodes_.back(); }
    [[nodiscard]] std::size_t cells() const noexcept { return nodes_.size() - 1; }

private:
    AdvertiserPair pair_;
    std::vector<double> nodes_;
    std::vector<double> v1_;
    std::vector<double> v2_;
    std::vector<double> cell1_;  // Simpson integral of v1 over each cell
    std::vector<double> cell2_;
};

/// Multipliers of `advertiser` (1 or 2) maximizing its discretized value on
/// up to two platforms subject to spend <= value, the opponent held at
/// `opponent`. Coarse grid search, then golden-section refinement.
std::vector<double> best_response(const DiscreteMarket& market, const AuctionProfile& profile,
                                  const std::vector<double>& weights,
                                  const std::vector<double>& opponent, int advertiser,
                                  const OracleConfig& cfg);

std::vector<double> best_response(const AdvertiserPair& pair, const AuctionProfile& profile,
                                  const std::vector<double>& opponent, int advertiser,
                                  const OracleConfig& cfg = {});

/// Damped alternating best responses from all multipliers equal to 1.
/// Throws OracleNoConvergence after max_rounds.
SubgameSolution equilibrium_by_dynamics(const AdvertiserPair& pair, const AuctionProfile& profile,
                                        const MarketShares& shares = MarketShares::full_copy(2),
                                        const OracleConfig& cfg = {});

struct QuantityCheck {
    std::string name;
    double analytic = 0.0;
    double oracle = 0.0;
    double delta = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Thresholds within 2 / n_queries, revenues within 1% relative.
std::vector<QuantityCheck> compare_with_oracle(const SubgameSolution& analytic,
                                               const SubgameSolution& oracle,
                                               const OracleConfig& cfg = {});

bool all_pass(const std::vector<QuantityCheck>& checks);

}  // namespace bidwars
