#pragma once

#include <array>
#include <vector>

#include "bidwars/subgame.hpp"
#include "bidwars/valuation.hpp"

namespace bidwars {

/// v1 = alpha q against v2 = 1 on [0, 1].
AdvertiserPair lincon_pair(double alpha);

/// 17 a x^7 - 17 x^6 + 4 x^5 - 17 x^4 + (8 - 3a) x^3 + x^2 + (4 - 2a) x + 1.
double lincon_septic(double alpha, double x);

/// alpha for which x is a root of the septic.
double lincon_alpha_of_x(double x);

inline constexpr double kLinconXLow = 0.237818;
inline constexpr double kLinconXHigh = 0.610502;

struct LinearConstantCase {
    double alpha = 0.0;
    double q_F = 0.0;      // FPA-platform threshold in the mixed profile
    double q_S = 0.0;      // SPA-platform threshold in the mixed profile
    double q_SS = 0.0;     // threshold when both platforms run SPA
    double rev_fpa_fpa = 0.0;
    double rev_spa_spa = 0.0;
    double rev_fpa = 0.0;  // FPA platform facing an SPA platform
    double rev_spa = 0.0;  // SPA platform facing an FPA platform
    // Profiles FPA-FPA, SPA-SPA and (FPA, SPA) on two full-copy platforms.
    SubgameSolution fpa_fpa;
    SubgameSolution spa_spa;
    SubgameSolution fpa_spa;
};

/// Closed forms for alpha in (2, 4); throws RangeError otherwise.
LinearConstantCase lincon_solve(double alpha);

/// Admissible septic root: the root in [x1, x5] closest to alpha(x) = alpha.
double lincon_q_fpa(double alpha);

struct LinconThresholds {
    double alpha_1 = 0.0;  // 3 - 4/a = (1 + q_F^2) / (2 q_F), lower crossing
    double alpha_2 = 0.0;  // (a^2 + 1) / (2a) = 2 - q_S
    double alpha_3 = 0.0;  // 3 - 4/a = (1 + q_F^2) / (2 q_F), upper crossing
};

LinconThresholds lincon_thresholds();

/// v1 = alpha e^{-q} against v2 = e^{-2q} on [0, inf).
AdvertiserPair exp_pair(double alpha);

/// u = 8 t^3 / (3 - t^2).
double exp_u_of_t(double t);

/// alpha(t) for t in (0, 0.7); throws RangeError otherwise.
double exp_alpha_of_t(double t);

/// Inverse of alpha(t) on (0.3, 0.65).
double exp_t_of_alpha(double alpha);

struct ExponentialCase {
    double alpha = 0.0;
    double t = 0.0;  // e^{-q_F}
    double u = 0.0;  // e^{-q_S}
    double w = 0.0;  // mu_2^F
    double x = 0.0;  // mu_1^S
    double y = 0.0;  // mu_1^F
    double z = 0.0;  // mu_2^S
    double rev_fpa_fpa = 0.0;
    double rev_spa_spa = 0.0;
    double rev_fpa = 0.0;
    double rev_spa = 0.0;
    SubgameSolution fpa_fpa;
    SubgameSolution spa_spa;
    SubgameSolution fpa_spa;
};

/// Closed forms for alpha in (1/4, 1/2); throws RangeError otherwise.
ExponentialCase exp_solve(double alpha);

/// Residuals of the four-equation FPA-SPA system in the variables
/// x = mu_1^S, y = mu_1^F, z = mu_2^S, w = mu_2^F.
std::array<double, 4> exp_system_residuals(double alpha, double x, double y, double z, double w);

struct DominanceCertificate {
    double t = 0.0;
    double F1 = 0.0;  // w - 1/(1 + t^2), negative when FPA loses against SPA
    double F2 = 0.0;  // 4 w t (1 - u/2) - 5/8, positive when SPA wins against FPA
    [[nodiscard]] bool holds() const noexcept { return F1 < 0.0 && F2 > 0.0; }
};

std::vector<DominanceCertificate> exp_dominance_certificates(const std::vector<double>& t_grid);

}  // namespace bidwars
