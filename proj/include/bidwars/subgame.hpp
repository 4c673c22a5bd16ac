#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string_view>
#include <string>
#include <vector>

#include "bidwars/numerics.hpp"
#include "bidwars/valuation.hpp"

namespace bidwars {

enum class Format { FPA, SPA };
enum class BiddingMode { PerPlatform, Uniform, SingleStrategic };
enum class Normalization { FullCopy, Scaled };

std::string_view to_string(Format f) noexcept;
std::string_view to_string(BiddingMode m) noexcept;
std::string_view to_string(Normalization n) noexcept;
Format parse_format(std::string_view s);

/// Auction format announced by each platform.
struct AuctionProfile {
    std::vector<Format> formats;

    [[nodiscard]] std::size_t size() const noexcept { return formats.size(); }
    [[nodiscard]] std::size_t count(Format f) const;
    [[nodiscard]] std::string describe() const;
    void validate() const;

    static AuctionProfile parse(std::string_view csv);
};

/// Market shares gamma_j. Full-copy: every platform owns all of the query
/// space with unscaled values. Scaled: platform j owns a gamma_j slice, so
/// its values are gamma_j * v.
struct MarketShares {
    std::vector<double> gamma;
    Normalization normalization = Normalization::FullCopy;

    static MarketShares full_copy(std::size_t n);
    static MarketShares scaled(std::vector<double> gamma);

    [[nodiscard]] std::size_t size() const noexcept { return gamma.size(); }
    /// Inventory weight of each platform: 1 (full copy) or gamma_j (scaled).
    [[nodiscard]] std::vector<double> weights() const;
    void validate() const;
};

/// What one advertiser obtains on one platform as a function of its own
/// multiplier, holding the opponent fixed.
struct LandscapeView {
    Format format = Format::SPA;
    std::function<double(double)> value;        // V_j(mu)
    std::function<double(double)> cost;         // C_j(mu)
    std::function<double(double)> value_slope;  // V_j'(mu)
    double saturation_bid = 0.0;                // may be +inf
};

/// Landscape of `advertiser` on a platform with inventory weight `weight`
/// when the opponent bids `mu_opp`.
LandscapeView landscape(const AdvertiserPair& pair, Format format, int advertiser,
                        double mu_opp, double weight = 1.0);

/// mu for SPA, mu + V/V' for FPA. Throws SaturatedLandscape if V' = 0 on FPA.
double marginal_cost(Format format, double mu, const LandscapeView& view);

struct SubgameSolution {
    BiddingMode mode = BiddingMode::PerPlatform;
    AuctionProfile profile;
    std::vector<double> weights;
    std::array<std::vector<double>, 2> multipliers;     // [advertiser-1][platform]
    std::vector<double> thresholds;
    std::vector<double> revenue;
    std::array<double, 2> value{};
    std::array<double, 2> spend{};
    std::array<std::vector<double>, 2> marginal_costs;
    // FPA-SPA reduction details (NaN when not applicable).
    double elasticity_1 = std::numeric_limits<double>::quiet_NaN();
    double elasticity_2 = std::numeric_limits<double>::quiet_NaN();
    double residual = 0.0;  // largest residual of the defining equations
    int iterations = 0;
    std::vector<std::string> flags;

    [[nodiscard]] double mu(int advertiser, std::size_t platform) const;
    [[nodiscard]] double total_revenue() const;
    [[nodiscard]] bool has_flag(std::string_view f) const;
};

/// Outcome of an arbitrary multiplier profile: thresholds, payments,
/// revenues and marginal costs. Solvers and closed forms share it.
SubgameSolution evaluate_profile(const AdvertiserPair& pair, const AuctionProfile& profile,
                                 const std::vector<double>& weights,
                                 const std::array<std::vector<double>, 2>& multipliers,
                                 BiddingMode mode = BiddingMode::PerPlatform);

/// False when some advertiser could buy all SPA inventory without breaking
/// its target at the opponent's limiting multiplier, i.e. no interior
/// equilibrium exists. Profiles containing an FPA platform pass.
bool check_existence_condition(const AuctionProfile& profile, const AdvertiserPair& pair);

SubgameSolution solve_fpa_fpa(const AdvertiserPair& pair,
                              const MarketShares& shares = MarketShares::full_copy(2));
SubgameSolution solve_spa_spa(const AdvertiserPair& pair,
                              const MarketShares& shares = MarketShares::full_copy(2),
                              const numerics::NumericsConfig& cfg = {});
/// Platform 0 runs FPA and platform 1 runs SPA.
SubgameSolution solve_fpa_spa(const AdvertiserPair& pair,
                              const MarketShares& shares = MarketShares::full_copy(2),
                              const numerics::NumericsConfig& cfg = {});

/// Per-platform multipliers for any profile and number of platforms. FPA
/// platforms and SPA platforms are merged into one FPA and one SPA market.
SubgameSolution solve_per_platform(const AdvertiserPair& pair, const AuctionProfile& profile,
                                   const MarketShares& shares,
                                   const numerics::NumericsConfig& cfg = {});

/// One multiplier per advertiser across all platforms, found by alternating
/// constrained best responses.
SubgameSolution solve_uniform_mode(const AdvertiserPair& pair, const AuctionProfile& profile,
                                   const MarketShares& shares,
                                   const numerics::NumericsConfig& cfg = {});

/// One strategic advertiser against static truthful bidders whose bids on
/// platform j are `static_curves[j]`.
SubgameSolution solve_single_strategic(const ValuationSpec& strategic,
                                       const std::vector<ValuationSpec>& static_curves,
                                       const AuctionProfile& profile, const MarketShares& shares,
                                       const numerics::NumericsConfig& cfg = {});

/// Post-hoc checks on a per-platform or uniform solution.
struct SolutionDiagnostics {
    double target_gap = 0.0;         // max |spend_i - value_i| / max(1, value_i)
    double mc_spread = 0.0;          // max relative MC difference across won platforms
    double payment_gap = 0.0;        // reported spend vs. quadrature of payments
    double threshold_gap = 0.0;      // max |mu1 v1(q*) - mu2 v2(q*)|
    double welfare_excess = 0.0;     // sum revenue - W*
};

SolutionDiagnostics diagnose(const AdvertiserPair& pair, const SubgameSolution& s,
                             const numerics::NumericsConfig& cfg = {});

}  // namespace bidwars
