#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bidwars/errors.hpp"
#include "bidwars/game.hpp"
#include "bidwars/metrics.hpp"
#include "bidwars/oracle.hpp"
#include "bidwars/subgame.hpp"
#include "bidwars/valuation.hpp"

namespace bidwars {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

/// Named families parameterized by one scalar, used by `sweep`.
/// mirror-linear, mirror-monomial, mirror-exp-growth, mirror-saturating,
/// lincon and exponential.
struct FamilyPreset {
    std::string name;
    double alpha = 1.0;
};

struct ScenarioConfig {
    Json source;  // the document as read, echoed into every report
    std::optional<FamilyPreset> preset;
    std::vector<ValuationSpec> advertisers;
    std::size_t platforms = 2;
    MarketShares shares = MarketShares::full_copy(2);
    BiddingMode mode = BiddingMode::PerPlatform;
    std::optional<AuctionProfile> profile;
    numerics::NumericsConfig numerics;
    OracleConfig oracle;
    std::vector<ValuationSpec> static_landscapes;  // SingleStrategic only

    [[nodiscard]] AdvertiserPair pair() const;
    /// Copy with the preset parameter replaced; throws ConfigError without a
    /// preset and RangeError outside the family's range.
    [[nodiscard]] ScenarioConfig with_alpha(double alpha) const;
};

ValuationSpec valuation_from_json(const Json& j);
Json to_json(const ValuationSpec& v);

std::vector<ValuationSpec> preset_advertisers(const FamilyPreset& preset);

/// Throws ConfigError on schema violations.
ScenarioConfig parse_scenario(const Json& doc);
ScenarioConfig load_scenario(const std::string& path);

Json to_json(const SubgameSolution& s);
Json to_json(const SolutionDiagnostics& d);
Json to_json(const MarketMetrics& m);
Json to_json(const EquilibriumReport& r);
Json to_json(const PayoffMatrix& m);
Json to_json(const QuantityCheck& c);
Json to_json(const Error& e);

/// One row per profile: profile, per-platform revenues, multipliers, error.
std::string matrix_csv(const PayoffMatrix& m);

/// 0 success, 1 solver failure, 2 invalid configuration, 3 oracle mismatch.
int exit_code_for(ErrorKind kind) noexcept;

struct CommandResult {
    Json report;
    int exit_code = 0;
    std::optional<PayoffMatrix> matrix;  // set by cmd_game
};

CommandResult cmd_solve(const ScenarioConfig& cfg,
                        const std::optional<AuctionProfile>& profile = std::nullopt);
CommandResult cmd_game(const ScenarioConfig& cfg, unsigned threads = 0);
CommandResult cmd_verify(const ScenarioConfig& cfg);

/// CSV with a fixed header and one row per step, in input order. Two
/// platforms only; the reported cell has platform 1 on FPA and platform 2 on
/// SPA.
std::string cmd_sweep(const ScenarioConfig& cfg, const std::string& param, double from,
                      double to, int steps, unsigned threads = 0);

std::string sweep_header();

}  // namespace bidwars
