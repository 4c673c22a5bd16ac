#include "bidwars/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bidwars/errors.hpp"
#include "bidwars/numerics.hpp"

namespace bidwars {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kRefineSpan = 3;

std::vector<double> multiplier_grid(const OracleConfig& cfg) {
    std::vector<double> g;
    g.reserve(cfg.grid_points + 1);
    for (int i = 0; i < cfg.grid_points; ++i) {
        const double f = static_cast<double>(i) / (cfg.grid_points - 1);
        g.push_back(cfg.grid_lo * std::pow(cfg.grid_hi / cfg.grid_lo, f));
    }
    g.push_back(1.0);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

// Value and net spend (spend - value) of one advertiser on one platform.
struct Landscape {
    const DiscreteMarket* market;
    Format format;
    double weight;
    double opponent;
    int advertiser;

    [[nodiscard]] std::pair<double, double> operator()(double mu) const {
        const double m1 = advertiser == 1 ? mu : opponent;
        const double m2 = advertiser == 1 ? opponent : mu;
        const auto out = market->run(format, m1, m2);
        const int i = advertiser - 1;
        return {weight * out.value[i], weight * (out.spend[i] - out.value[i])};
    }
};

struct Table {
    std::vector<double> value;
    std::vector<double> net;
};

Table tabulate(const Landscape& land, const std::vector<double>& grid) {
    Table t;
    t.value.reserve(grid.size());
    t.net.reserve(grid.size());
    for (double mu : grid) {
        const auto [v, s] = land(mu);
        t.value.push_back(v);
        t.net.push_back(s);
    }
    return t;
}

// Largest multiplier whose net spend fits in `budget`, refined between grid
// points by root finding. Returns -1 when no grid point fits.
double largest_feasible(const Landscape& land, const std::vector<double>& grid, const Table& t,
                        double budget) {
    int k = static_cast<int>(grid.size()) - 1;
    while (k >= 0 && t.net[k] > budget) --k;
    if (k < 0) return -1.0;
    if (k + 1 == static_cast<int>(grid.size())) return grid[k];
    // Net spend can jump where the allocation does, so keep the feasible end.
    numerics::NumericsConfig tight;
    tight.root_abs_tol = 1e-14;
    const double mu = numerics::find_root(
        [&](double m) { return land(m).second - budget; }, grid[k], grid[k + 1], tight);
    double m = mu;
    for (int step = 0; step < 8 && m > grid[k]; ++step) {
        if (land(m).second <= budget) return m;
        m = std::max(grid[k], m * (1.0 - 1e-13));
    }
    return grid[k];
}

}  // namespace

void OracleConfig::validate() const {
    if (n_queries < 100) throw Error(ErrorKind::ConfigError, "oracle.n_queries must be at least 100");
    if (grid_points < 10) throw Error(ErrorKind::ConfigError, "oracle.grid_points must be at least 10");
    if (!(grid_lo > 0.0) || grid_lo > 0.5 || grid_hi < 10.0) {
        throw Error(ErrorKind::ConfigError, "oracle multiplier grid must cover [0.5, 10]");
    }
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw Error(ErrorKind::ConfigError, "oracle.damping must lie in (0, 1]");
    }
    if (max_rounds < 1 || !(convergence_tol > 0.0) || !(half_line_cutoff > 0.0)) {
        throw Error(ErrorKind::ConfigError, "oracle rounds, tolerance and cutoff must be positive");
    }
}

DiscreteMarket::DiscreteMarket(const AdvertiserPair& pair, const OracleConfig& cfg) : pair_(pair) {
    cfg.validate();
    const double end = pair.domain() == Domain::Unit ? 1.0 : cfg.half_line_cutoff;
    const int n = cfg.n_queries;
    nodes_.resize(n + 1);
    v1_.resize(n + 1);
    v2_.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        nodes_[k] = end * static_cast<double>(k) / n;
        v1_[k] = pair.v1().eval(nodes_[k]);
        v2_[k] = pair.v2().eval(nodes_[k]);
    }
    cell1_.resize(n);
    cell2_.resize(n);
    for (int k = 0; k < n; ++k) {
        const double mid = 0.5 * (nodes_[k] + nodes_[k + 1]);
        const double width = nodes_[k + 1] - nodes_[k];
        cell1_[k] = width / 6.0 * (v1_[k] + 4.0 * pair.v1().eval(mid) + v1_[k + 1]);
        cell2_[k] = width / 6.0 * (v2_[k] + 4.0 * pair.v2().eval(mid) + v2_[k + 1]);
    }
}

DiscreteMarket::Outcome DiscreteMarket::run(Format format, double mu1, double mu2) const {
    Outcome out;
    const std::size_t n = cells();
    const auto& f1 = pair_.v1();
    const auto& f2 = pair_.v2();
    bool crossed = false;
    out.threshold = upper();
    double d_left = mu1 * v1_[0] - mu2 * v2_[0];
    if (d_left > 0.0) {
        out.threshold = 0.0;
        crossed = true;
    }
    double a1 = 0.0, a2 = 0.0;  // advertiser 1's won set: int v1, int v2
    double b1 = 0.0, b2 = 0.0;  // advertiser 2's won set: int v1, int v2
    for (std::size_t k = 0; k < n; ++k) {
        const double d_right = mu1 * v1_[k + 1] - mu2 * v2_[k + 1];
        const bool left_won = d_left > 0.0;
        const bool right_won = d_right > 0.0;
        if (left_won == right_won) {
            if (left_won) {
                a1 += cell1_[k];
                a2 += cell2_[k];
            } else {
                b1 += cell1_[k];
                b2 += cell2_[k];
            }
        } else {
            const double lo = nodes_[k];
            const auto d = [&](double q) { return mu1 * f1.eval(q) - mu2 * f2.eval(q); };
            const double x = numerics::find_root(d, lo, nodes_[k + 1]);
            const double mid = 0.5 * (lo + x);
            const double left1 = (x - lo) / 6.0 * (v1_[k] + 4.0 * f1.eval(mid) + f1.eval(x));
            const double left2 = (x - lo) / 6.0 * (v2_[k] + 4.0 * f2.eval(mid) + f2.eval(x));
            const double right1 = cell1_[k] - left1;
            const double right2 = cell2_[k] - left2;
            if (left_won) {
                a1 += left1;
                a2 += left2;
                b1 += right1;
                b2 += right2;
            } else {
                b1 += left1;
                b2 += left2;
                a1 += right1;
                a2 += right2;
                if (!crossed) {
                    out.threshold = x;
                    crossed = true;
                }
            }
        }
        d_left = d_right;
    }
    out.value = {a1, b2};
    if (format == Format::FPA) {
        out.spend = {mu1 * a1, mu2 * b2};
    } else {
        out.spend = {mu2 * a2, mu1 * b1};
    }
    out.revenue = out.spend[0] + out.spend[1];
    return out;
}

std::vector<double> best_response(const DiscreteMarket& market, const AuctionProfile& profile,
                                  const std::vector<double>& weights,
                                  const std::vector<double>& opponent, int advertiser,
                                  const OracleConfig& cfg) {
    const std::size_t n = profile.size();
    if (n == 0 || n > 2) {
        throw Error(ErrorKind::ConfigError, "the oracle handles one or two platforms");
    }
    if (weights.size() != n || opponent.size() != n) {
        throw Error(ErrorKind::ConfigError, "oracle inputs differ in length");
    }
    const auto grid = multiplier_grid(cfg);
    std::vector<Landscape> land;
    std::vector<Table> tab;
    for (std::size_t j = 0; j < n; ++j) {
        land.push_back({&market, profile.formats[j], weights[j], opponent[j], advertiser});
        tab.push_back(tabulate(land.back(), grid));
    }

    if (n == 1) {
        // Value is non-decreasing, so the largest feasible bid is optimal.
        const double mu = largest_feasible(land[0], grid, tab[0], 0.0);
        return {mu > 0.0 ? mu : grid.front()};
    }

    const int g = static_cast<int>(grid.size());
    int best_a = -1;
    double best_total = kNegInf;
    for (int ia = 0; ia < g; ++ia) {
        const double budget = -tab[0].net[ia];
        int kb = g - 1;
        while (kb >= 0 && tab[1].net[kb] > budget) --kb;
        if (kb < 0) continue;
        // Interpolate toward the next grid point; rounding down alone biases
        // the scan by a whole grid step of value, far more than the curvature
        // along the budget line.
        double vb = tab[1].value[kb];
        if (kb + 1 < g && tab[1].net[kb + 1] > tab[1].net[kb]) {
            const double f = (budget - tab[1].net[kb]) / (tab[1].net[kb + 1] - tab[1].net[kb]);
            vb += std::clamp(f, 0.0, 1.0) * (tab[1].value[kb + 1] - tab[1].value[kb]);
        }
        const double total = tab[0].value[ia] + vb;
        if (total >= best_total) {
            best_total = total;
            best_a = ia;
        }
    }
    if (best_a < 0) return {grid.front(), grid.front()};

    const auto inner = [&](double mu_a) {
        const auto [va, sa] = land[0](mu_a);
        const double mu_b = largest_feasible(land[1], grid, tab[1], -sa);
        return std::pair{mu_b, mu_b > 0.0 ? va + land[1](mu_b).first : kNegInf};
    };
    const double lo = std::log(grid[std::max(best_a - kRefineSpan, 0)]);
    const double hi = std::log(grid[std::min(best_a + kRefineSpan, g - 1)]);
    const double x = numerics::golden_max([&](double s) { return inner(std::exp(s)).second; }, lo,
                                          hi, 1e-10, 200);
    const auto refined = inner(std::exp(x));
    const auto coarse = inner(grid[best_a]);
    if (refined.second >= coarse.second) return {std::exp(x), refined.first};
    return {grid[best_a], coarse.first};
}

std::vector<double> best_response(const AdvertiserPair& pair, const AuctionProfile& profile,
                                  const std::vector<double>& opponent, int advertiser,
                                  const OracleConfig& cfg) {
    const DiscreteMarket market(pair, cfg);
    return best_response(market, profile, std::vector<double>(profile.size(), 1.0), opponent,
                         advertiser, cfg);
}

SubgameSolution equilibrium_by_dynamics(const AdvertiserPair& pair, const AuctionProfile& profile,
                                        const MarketShares& shares, const OracleConfig& cfg) {
    profile.validate();
    shares.validate();
    if (profile.size() != shares.size()) {
        throw Error(ErrorKind::ConfigError, "profile and market shares have different lengths");
    }
    const DiscreteMarket market(pair, cfg);
    const auto w = shares.weights();
    const std::size_t n = profile.size();
    std::vector<double> mu1(n, 1.0);
    std::vector<double> mu2(n, 1.0);
    const double d = cfg.damping;

    int round = 0;
    bool converged = false;
    while (!converged) {
        if (round >= cfg.max_rounds) {
            throw Error(ErrorKind::OracleNoConvergence,
                        "best-response dynamics did not settle within max_rounds");
        }
        ++round;
        double change = 0.0;
        const auto br1 = best_response(market, profile, w, mu2, 1, cfg);
        for (std::size_t j = 0; j < n; ++j) {
            const double next = (1.0 - d) * mu1[j] + d * br1[j];
            change = std::max(change, std::abs(next - mu1[j]));
            mu1[j] = next;
        }
        const auto br2 = best_response(market, profile, w, mu1, 2, cfg);
        for (std::size_t j = 0; j < n; ++j) {
            const double next = (1.0 - d) * mu2[j] + d * br2[j];
            change = std::max(change, std::abs(next - mu2[j]));
            mu2[j] = next;
        }
        converged = change < cfg.convergence_tol;
    }

    SubgameSolution s;
    s.profile = profile;
    s.weights = w;
    s.multipliers = {mu1, mu2};
    s.iterations = round;
    s.flags.push_back("oracle");
    for (std::size_t j = 0; j < n; ++j) {
        const auto out = market.run(profile.formats[j], mu1[j], mu2[j]);
        s.thresholds.push_back(out.threshold);
        s.revenue.push_back(w[j] * out.revenue);
        for (int i = 0; i < 2; ++i) {
            s.value[i] += w[j] * out.value[i];
            s.spend[i] += w[j] * out.spend[i];
            s.marginal_costs[i].push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    s.residual = std::max(s.spend[0] - s.value[0], s.spend[1] - s.value[1]);
    return s;
}

std::vector<QuantityCheck> compare_with_oracle(const SubgameSolution& analytic,
                                               const SubgameSolution& oracle,
                                               const OracleConfig& cfg) {
    if (analytic.profile.size() != oracle.profile.size()) {
        throw Error(ErrorKind::ConfigError, "solutions cover different platform counts");
    }
    std::vector<QuantityCheck> out;
    const double q_tol = 2.0 / cfg.n_queries;
    for (std::size_t j = 0; j < analytic.profile.size(); ++j) {
        const std::string tag = "platform" + std::to_string(j + 1);
        QuantityCheck q{tag + ".threshold", analytic.thresholds[j], oracle.thresholds[j], 0.0,
                        q_tol, false};
        const double qa = std::min(q.analytic, cfg.half_line_cutoff);
        q.delta = std::abs(qa - q.oracle);
        q.pass = q.delta <= q.tolerance;
        out.push_back(q);

        QuantityCheck r{tag + ".revenue", analytic.revenue[j], oracle.revenue[j], 0.0, 0.0, false};
        r.delta = std::abs(r.analytic - r.oracle);
        r.tolerance = 0.01 * std::abs(r.analytic);
        r.pass = r.delta <= r.tolerance;
        out.push_back(r);
    }
    return out;
}

bool all_pass(const std::vector<QuantityCheck>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const QuantityCheck& c) { return c.pass; });
}

}  // namespace bidwars
