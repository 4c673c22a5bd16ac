#pragma once

#include <optional>

#include "bidwars/subgame.hpp"
#include "bidwars/valuation.hpp"

namespace bidwars {

struct MarketMetrics {
    double W_star = 0.0;  // liquid welfare over all platforms
    double L = 0.0;       // int_0^{q_eff} v1
    double H = 0.0;       // int_{q_eff}^end v1
    double C_A = 0.0;
    double q_eff = 0.0;
    double E1_at_qeff = 0.0;
    double E2_at_qeff = 0.0;
    std::optional<double> Q;  // only for inefficiency-free (mirrored) pairs
};

/// Sum over platforms of the weight times int max(v1, v2).
double liquid_welfare(const AdvertiserPair& pair, const MarketShares& shares);

/// 1 - int (v_(1) - v_(2)) / int v_(1). Throws ZeroMarket when int v_(1) = 0.
double competition(const AdvertiserPair& pair);

/// v2(q) = v1(1 - q) up to sampling tolerance (structural or numeric).
bool is_mirrored(const AdvertiserPair& pair);

/// E(q_eff) * L / H for mirrored pairs; throws ModeError otherwise.
double q_parameter(const AdvertiserPair& pair);

MarketMetrics market_metrics(const AdvertiserPair& pair, const MarketShares& shares);

}  // namespace bidwars
