#include "bidwars/metrics.hpp"

#include <cmath>

#include "bidwars/errors.hpp"

namespace bidwars {

namespace {

// Integrals of the pointwise highest and second-highest valuations.
struct Ranked {
    double top = 0.0;
    double second = 0.0;
};

Ranked ranked_integrals(const AdvertiserPair& pair) {
    const double q = pair.threshold(1.0, 1.0);
    Ranked r;
    r.top = pair.head(2, q) + pair.tail(1, q);
    r.second = pair.head(1, q) + pair.tail(2, q);
    return r;
}

}  // namespace

double liquid_welfare(const AdvertiserPair& pair, const MarketShares& shares) {
    shares.validate();
    const double per_unit = ranked_integrals(pair).top;
    double total = 0.0;
    for (double w : shares.weights()) total += w * per_unit;
    return total;
}

double competition(const AdvertiserPair& pair) {
    const Ranked r = ranked_integrals(pair);
    if (!(r.top > 0.0)) throw Error(ErrorKind::ZeroMarket, "highest valuation integrates to zero");
    if (!std::isfinite(r.top)) throw Error(ErrorKind::ZeroMarket, "valuations are not integrable");
    return 1.0 - (r.top - r.second) / r.top;
}

bool is_mirrored(const AdvertiserPair& pair) {
    if (pair.is_structural_mirror()) return true;
    if (pair.domain() != Domain::Unit) return false;
    for (int k = 0; k <= 64; ++k) {
        const double q = k / 64.0;
        const double a = pair.v2().eval(q);
        const double b = pair.v1().eval(1.0 - q);
        if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) return false;
    }
    return true;
}

double q_parameter(const AdvertiserPair& pair) {
    if (!is_mirrored(pair)) {
        throw Error(ErrorKind::ModeError, "Q is defined only for mirrored (inefficiency-free) pairs");
    }
    const double q = efficient_threshold(pair);
    const double L = pair.head(1, q);
    const double H = pair.tail(1, q);
    return elasticity(pair, 1, q) * L / H;
}

MarketMetrics market_metrics(const AdvertiserPair& pair, const MarketShares& shares) {
    MarketMetrics m;
    m.W_star = liquid_welfare(pair, shares);
    m.q_eff = pair.threshold(1.0, 1.0);
    m.L = pair.head(1, m.q_eff);
    m.H = pair.tail(1, m.q_eff);
    m.C_A = competition(pair);
    try {
        m.E1_at_qeff = elasticity(pair, 1, m.q_eff);
        m.E2_at_qeff = elasticity(pair, 2, m.q_eff);
    } catch (const Error&) {
        m.E1_at_qeff = std::numeric_limits<double>::quiet_NaN();
        m.E2_at_qeff = std::numeric_limits<double>::quiet_NaN();
    }
    if (is_mirrored(pair)) m.Q = m.E1_at_qeff * m.C_A;
    return m;
}

}  // namespace bidwars
