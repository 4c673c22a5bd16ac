#include "bidwars/subgame.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bidwars/errors.hpp"

namespace bidwars {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEdge = 1e-6;
constexpr int kScanCells = 400;

double rel_diff(double a, double b) {
    const double s = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / s;
}

/// Opponent multiplier making `advertiser` indifferent at the end of the
/// domain it would capture by winning everything.
double saturation_bid(const AdvertiserPair& pair, int advertiser, double mu_opp) {
    if (advertiser == 1) {
        const double a = pair.v1().eval(0.0);
        const double b = pair.v2().eval(0.0);
        if (a == 0.0) return b == 0.0 ? 0.0 : kInf;
        return mu_opp * b / a;
    }
    const double end = pair.scan_upper();
    const double a = pair.v1().eval(end);
    const double b = pair.v2().eval(end);
    if (b == 0.0 || pair.domain() == Domain::HalfLine) return a == 0.0 ? 0.0 : kInf;
    return mu_opp * a / b;
}

double value_slope(const AdvertiserPair& pair, int advertiser, double mu, double mu_opp,
                   double weight) {
    const double mu1 = advertiser == 1 ? mu : mu_opp;
    const double mu2 = advertiser == 1 ? mu_opp : mu;
    const double q = pair.threshold(mu1, mu2);
    if (q <= 0.0 || q >= pair.upper()) return 0.0;
    const double d1 = pair.v1().derivative(q);
    const double d2 = pair.v2().derivative(q);
    const double denom = mu1 * d1 - mu2 * d2;
    if (!(denom > 0.0)) return 0.0;
    const double vi = pair.v(advertiser).eval(q);
    return weight * vi * vi / denom;
}

void add_flag(SubgameSolution& s, const std::string& f) {
    if (!s.has_flag(f)) s.flags.push_back(f);
}

void add_structure_flags(const AdvertiserPair& pair, SubgameSolution& s) {
    if (!pair.monotone_valuations()) add_flag(s, "non_monotone_valuations");
    if (!pair.h_convex()) add_flag(s, "uniqueness_unverified");
}

struct GroupWeights {
    double fpa = 0.0;
    double spa = 0.0;
};

GroupWeights group_weights(const AuctionProfile& profile, const std::vector<double>& w) {
    GroupWeights g;
    for (std::size_t j = 0; j < profile.size(); ++j) {
        (profile.formats[j] == Format::FPA ? g.fpa : g.spa) += w[j];
    }
    return g;
}

std::array<std::vector<double>, 2> expand(const AuctionProfile& profile, double m1F, double m2F,
                                          double m1S, double m2S) {
    std::array<std::vector<double>, 2> mu;
    for (Format f : profile.formats) {
        mu[0].push_back(f == Format::FPA ? m1F : m1S);
        mu[1].push_back(f == Format::FPA ? m2F : m2S);
    }
    return mu;
}

void check_pair_shares(const AuctionProfile& profile, const MarketShares& shares) {
    profile.validate();
    shares.validate();
    if (profile.size() != shares.size()) {
        throw Error(ErrorKind::ConfigError, "profile and market shares have different lengths");
    }
}

// FPA-SPA reduction over q_F.
struct FpaSpaPoint {
    double qF = kNaN, qS = kNaN;
    double e1 = kNaN, e2 = kNaN;
    double m1F = kNaN, m2F = kNaN, m1S = kNaN, m2S = kNaN;
    double residual = kNaN;
};

FpaSpaPoint fpa_spa_point(const AdvertiserPair& pair, double wF, double wS, double qF) {
    FpaSpaPoint p;
    p.qF = qF;
    try {
        p.e1 = elasticity(pair, 1, qF);
        p.e2 = elasticity(pair, 2, qF);
    } catch (const Error&) {
        return p;
    }
    const double hF = pair.h(qF);
    if (!std::isfinite(hF) || !(hF > 0.0)) return p;
    const double target = p.e2 / p.e1 * hF;
    const double qS = pair.threshold(1.0, target);
    const double end = pair.domain() == Domain::Unit ? 1.0 : pair.scan_upper();
    if (!(qS > 0.0) || !(qS < end)) return p;
    // A threshold pinned at the root tolerance does not solve h(qS) = target.
    if (!(std::abs(pair.h(qS) / target - 1.0) < 1e-6)) return p;
    p.qS = qS;
    const double I1F = pair.tail(1, qF);
    const double J2F = pair.head(2, qF);
    const double I1S = pair.tail(1, qS);
    const double I2S = pair.tail(2, qS);
    const double J1S = pair.head(1, qS);
    const double J2S = pair.head(2, qS);
    p.m1F = (wF * I1F + wS * I1S) / (wF * I1F + wS * p.e2 * hF * I2S);
    p.m2F = hF * p.m1F;
    p.m1S = p.e1 * p.m1F;
    p.m2S = p.e2 * p.m2F;
    const double scale = wF * J2F + wS * J2S;
    p.residual = (wF * p.m2F * J2F + wS * p.m1S * J1S - wF * J2F - wS * J2S) / scale;
    return p;
}

double spa_spa_residual(const AdvertiserPair& pair, double q) {
    const double I1 = pair.tail(1, q);
    const double I2 = pair.tail(2, q);
    const double J1 = pair.head(1, q);
    const double J2 = pair.head(2, q);
    const double a = pair.v1().eval(q);
    const double b = pair.v2().eval(q);
    if (!(I1 > 0.0 && I2 > 0.0 && J1 > 0.0 && J2 > 0.0 && a > 0.0 && b > 0.0)) return kNaN;
    return std::log(a) - std::log(b) - std::log(I1) - std::log(J1) + std::log(I2) + std::log(J2);
}

double scan_hi(const AdvertiserPair& pair) {
    return pair.domain() == Domain::Unit ? 1.0 - kEdge : pair.scan_upper();
}

// Uniform mode: Sum_j w_j (C_j - V_j) for one advertiser.
double uniform_slack(const AdvertiserPair& pair, const GroupWeights& g, int adv, double mu,
                     double mu_opp) {
    const double mu1 = adv == 1 ? mu : mu_opp;
    const double mu2 = adv == 1 ? mu_opp : mu;
    const double q = pair.threshold(mu1, mu2);
    if (adv == 1) {
        const double I1 = pair.tail(1, q);
        const double I2 = pair.tail(2, q);
        return g.fpa * (mu - 1.0) * I1 + g.spa * (mu_opp * I2 - I1);
    }
    const double J1 = pair.head(1, q);
    const double J2 = pair.head(2, q);
    return g.fpa * (mu - 1.0) * J2 + g.spa * (mu_opp * J1 - J2);
}

double uniform_best_response(const AdvertiserPair& pair, const GroupWeights& g, int adv,
                             double mu_opp, const numerics::NumericsConfig& cfg) {
    const auto slack = [&](double mu) { return uniform_slack(pair, g, adv, mu, mu_opp); };
    if (slack(1.0) <= 0.0) {
        // Slack increases in mu above 1, so the largest feasible bid is a root.
        const double hm = saturation_bid(pair, adv, mu_opp);
        double hi = std::isfinite(hm) ? std::max(hm, 1.0) : 2.0;
        if (std::isfinite(hm)) {
            if (slack(hi) <= 0.0) return hi;
        } else {
            while (slack(hi) <= 0.0) {
                hi *= 2.0;
                if (hi > 1e9) return hi;
            }
        }
        return numerics::find_root(slack, 1.0, hi, cfg);
    }
    // Infeasible at mu = 1: walk down to the largest feasible bid below 1.
    double prev = 1.0;
    for (int k = 1; k <= 400; ++k) {
        const double mu = std::pow(10.0, -6.0 * k / 400.0);
        if (slack(mu) <= 0.0) return numerics::find_root(slack, mu, prev, cfg);
        prev = mu;
    }
    return 1e-6;
}

// Single strategic advertiser against a static bid curve on one platform.
struct StaticPlatform {
    const ValuationSpec* v;
    const ValuationSpec* s;
    double weight;
    double hi;

    // Intervals of the query space where mu v > s.
    [[nodiscard]] std::vector<std::pair<double, double>> won(double mu) const {
        const auto d = [&](double q) { return mu * v->eval(q) - s->eval(q); };
        auto roots = numerics::find_all_roots(d, 0.0, hi, 256);
        std::vector<double> cuts{0.0};
        for (double r : roots) {
            if (r > cuts.back()) cuts.push_back(r);
        }
        if (hi > cuts.back()) cuts.push_back(hi);
        std::vector<std::pair<double, double>> out;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
            if (d(mid) > 0.0) {
                const double b = (k + 2 == cuts.size()) ? v->upper() : cuts[k + 1];
                if (!out.empty() && out.back().second == cuts[k]) {
                    out.back().second = b;
                } else {
                    out.emplace_back(cuts[k], b);
                }
            }
        }
        return out;
    }

    [[nodiscard]] double integrate(const ValuationSpec& f,
                                   const std::vector<std::pair<double, double>>& set) const {
        double total = 0.0;
        for (const auto& [a, b] : set) total += f.integral(a, b);
        return weight * total;
    }

    [[nodiscard]] double value(double mu) const { return integrate(*v, won(mu)); }

    // V'(mu): each interior boundary q of the won set moves at rate
    // v / |mu v' - s'|, carrying value v(q).
    [[nodiscard]] double slope(double mu) const {
        double total = 0.0;
        for (const auto& [a, b] : won(mu)) {
            for (double q : {a, b}) {
                if (q <= 0.0 || q >= hi) continue;
                const double vq = v->eval(q);
                const double denom = std::abs(mu * v->derivative(q) - s->derivative(q));
                if (denom > 0.0) total += vq * vq / denom;
            }
        }
        return weight * total;
    }
    [[nodiscard]] double full_value() const { return weight * v->integral(0.0, v->upper()); }
    [[nodiscard]] double full_static() const { return weight * s->integral(0.0, s->upper()); }

    [[nodiscard]] double cost(Format f, double mu) const {
        const auto set = won(mu);
        return f == Format::FPA ? mu * integrate(*v, set) : integrate(*s, set);
    }

    // FPA multiplier maximizing k V(mu) - mu V(mu).
    [[nodiscard]] double fpa_bid(double k) const {
        constexpr int kGrid = 48;
        const double lo = k * 1e-6;
        std::vector<double> grid(kGrid);
        for (int i = 0; i < kGrid; ++i) {
            grid[i] = lo * std::pow(k / lo, static_cast<double>(i) / (kGrid - 1));
        }
        const auto phi = [&](double mu) { return (k - mu) * value(mu); };
        int best = 0;
        double best_val = -kInf;
        for (int i = 0; i < kGrid; ++i) {
            const double f = phi(grid[i]);
            if (f >= best_val) {
                best_val = f;
                best = i;
            }
        }
        const double a = grid[std::max(best - 1, 0)];
        const double b = grid[std::min(best + 1, kGrid - 1)];
        double mu = numerics::golden_max(phi, a, b, 1e-13 * k, 300);
        if (!(phi(mu) >= best_val)) mu = grid[best];
        // Polish on the first-order condition, which is far better
        // conditioned than the objective near its maximum.
        const auto foc = [&](double m) { return (k - m) * slope(m) - value(m); };
        const double span = 1e-6 * k;
        const double lo_b = std::max(a, mu - span);
        const double hi_b = std::min(b, mu + span);
        if (foc(lo_b) > 0.0 && foc(hi_b) < 0.0) {
            const double polished = numerics::find_root(foc, lo_b, hi_b);
            if (phi(polished) >= phi(mu) - 1e-15 * std::abs(phi(mu))) mu = polished;
        }
        return mu;
    }
};

}  // namespace

std::string_view to_string(Format f) noexcept { return f == Format::FPA ? "FPA" : "SPA"; }

std::string_view to_string(BiddingMode m) noexcept {
    switch (m) {
        case BiddingMode::PerPlatform: return "PerPlatform";
        case BiddingMode::Uniform: return "Uniform";
        case BiddingMode::SingleStrategic: return "SingleStrategic";
    }
    return "Unknown";
}

std::string_view to_string(Normalization n) noexcept {
    return n == Normalization::FullCopy ? "full-copy" : "scaled";
}

Format parse_format(std::string_view s) {
    if (s == "FPA" || s == "fpa") return Format::FPA;
    if (s == "SPA" || s == "spa") return Format::SPA;
    throw Error(ErrorKind::ConfigError, "unknown auction format '" + std::string(s) + "'");
}

std::size_t AuctionProfile::count(Format f) const {
    return static_cast<std::size_t>(std::count(formats.begin(), formats.end(), f));
}

std::string AuctionProfile::describe() const {
    std::string out;
    for (std::size_t j = 0; j < formats.size(); ++j) {
        if (j > 0) out += ',';
        out += to_string(formats[j]);
    }
    return out;
}

void AuctionProfile::validate() const {
    if (formats.empty()) throw Error(ErrorKind::ConfigError, "profile needs at least one platform");
}

AuctionProfile AuctionProfile::parse(std::string_view csv) {
    AuctionProfile p;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::size_t end = comma == std::string_view::npos ? csv.size() : comma;
        p.formats.push_back(parse_format(csv.substr(start, end - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    p.validate();
    return p;
}

MarketShares MarketShares::full_copy(std::size_t n) {
    return {std::vector<double>(n, 1.0), Normalization::FullCopy};
}

MarketShares MarketShares::scaled(std::vector<double> gamma) {
    MarketShares m{std::move(gamma), Normalization::Scaled};
    m.validate();
    return m;
}

std::vector<double> MarketShares::weights() const {
    if (normalization == Normalization::FullCopy) return std::vector<double>(gamma.size(), 1.0);
    return gamma;
}

void MarketShares::validate() const {
    if (gamma.empty()) throw Error(ErrorKind::ConfigError, "at least one platform is required");
    for (double g : gamma) {
        if (!(g > 0.0 && g <= 1.0)) {
            throw Error(ErrorKind::ConfigError, "shares must lie in (0, 1]");
        }
    }
    if (normalization == Normalization::Scaled) {
        const double sum = std::accumulate(gamma.begin(), gamma.end(), 0.0);
        if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorKind::ConfigError, "shares must sum to 1");
    }
}

LandscapeView landscape(const AdvertiserPair& pair, Format format, int advertiser,
                        double mu_opp, double weight) {
    if (advertiser != 1 && advertiser != 2) {
        throw Error(ErrorKind::DomainError, "advertiser index must be 1 or 2");
    }
    LandscapeView view;
    view.format = format;
    view.saturation_bid = saturation_bid(pair, advertiser, mu_opp);
    const auto thr = [&pair, advertiser, mu_opp](double mu) {
        return advertiser == 1 ? pair.threshold(mu, mu_opp) : pair.threshold(mu_opp, mu);
    };
    if (advertiser == 1) {
        view.value = [&pair, thr, weight](double mu) { return weight * pair.tail(1, thr(mu)); };
    } else {
        view.value = [&pair, thr, weight](double mu) { return weight * pair.head(2, thr(mu)); };
    }
    if (format == Format::FPA) {
        view.cost = [value = view.value](double mu) { return mu * value(mu); };
    } else if (advertiser == 1) {
        view.cost = [&pair, thr, weight, mu_opp](double mu) {
            return weight * mu_opp * pair.tail(2, thr(mu));
        };
    } else {
        view.cost = [&pair, thr, weight, mu_opp](double mu) {
            return weight * mu_opp * pair.head(1, thr(mu));
        };
    }
    view.value_slope = [&pair, advertiser, mu_opp, weight](double mu) {
        return value_slope(pair, advertiser, mu, mu_opp, weight);
    };
    return view;
}

double marginal_cost(Format format, double mu, const LandscapeView& view) {
    if (format == Format::SPA) return mu;
    const double slope = view.value_slope(mu);
    if (!(slope > 0.0)) {
        throw Error(ErrorKind::SaturatedLandscape, "value landscape is flat at this multiplier");
    }
    return mu + view.value(mu) / slope;
}

double SubgameSolution::mu(int advertiser, std::size_t platform) const {
    return multipliers.at(advertiser - 1).at(platform);
}

double SubgameSolution::total_revenue() const {
    return std::accumulate(revenue.begin(), revenue.end(), 0.0);
}

bool SubgameSolution::has_flag(std::string_view f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

SubgameSolution evaluate_profile(const AdvertiserPair& pair, const AuctionProfile& profile,
                                 const std::vector<double>& weights,
                                 const std::array<std::vector<double>, 2>& multipliers,
                                 BiddingMode mode) {
    const std::size_t n = profile.size();
    if (weights.size() != n || multipliers[0].size() != n || multipliers[1].size() != n) {
        throw Error(ErrorKind::ConfigError, "profile, weights and multipliers differ in length");
    }
    SubgameSolution s;
    s.mode = mode;
    s.profile = profile;
    s.weights = weights;
    s.multipliers = multipliers;
    for (std::size_t j = 0; j < n; ++j) {
        const double m1 = multipliers[0][j];
        const double m2 = multipliers[1][j];
        if (!(m1 > 0.0) || !(m2 > 0.0)) {
            throw Error(ErrorKind::DegenerateSolution, "multipliers must be positive");
        }
        const double w = weights[j];
        const double q = pair.threshold(m1, m2);
        const double I1 = pair.tail(1, q);
        const double J2 = pair.head(2, q);
        double pay1;
        double pay2;
        if (profile.formats[j] == Format::FPA) {
            pay1 = w * m1 * I1;
            pay2 = w * m2 * J2;
        } else {
            pay1 = w * m2 * pair.tail(2, q);
            pay2 = w * m1 * pair.head(1, q);
        }
        s.thresholds.push_back(q);
        s.value[0] += w * I1;
        s.value[1] += w * J2;
        s.spend[0] += pay1;
        s.spend[1] += pay2;
        s.revenue.push_back(pay1 + pay2);
        for (int adv = 1; adv <= 2; ++adv) {
            const double mu = adv == 1 ? m1 : m2;
            const double opp = adv == 1 ? m2 : m1;
            const auto view = landscape(pair, profile.formats[j], adv, opp, w);
            double mc = kNaN;
            try {
                mc = marginal_cost(profile.formats[j], mu, view);
            } catch (const Error&) {
            }
            s.marginal_costs[adv - 1].push_back(mc);
        }
    }
    return s;
}

bool check_existence_condition(const AuctionProfile& profile, const AdvertiserPair& pair) {
    profile.validate();
    if (profile.count(Format::FPA) > 0) return true;
    constexpr double kProbe = 1e-5;
    for (int adv = 1; adv <= 2; ++adv) {
        if (std::isfinite(saturation_bid(pair, adv, 1.0))) continue;
        double mu_opp;
        double opp_mass;
        double own_mass;
        if (adv == 1) {
            // Advertiser 2 keeps [0, q) and stays tight as q -> 0.
            const double q = kProbe;
            mu_opp = pair.h(q) * pair.head(2, q) / pair.head(1, q);
            opp_mass = pair.v2().integral(0.0, pair.upper());
            own_mass = pair.v1().integral(0.0, pair.upper());
        } else {
            const double q = pair.domain() == Domain::Unit ? 1.0 - kProbe : pair.scan_upper();
            mu_opp = pair.tail(1, q) / (pair.tail(2, q) * pair.h(q));
            opp_mass = pair.v1().integral(0.0, pair.upper());
            own_mass = pair.v2().integral(0.0, pair.upper());
        }
        if (!std::isfinite(mu_opp)) continue;
        if (!(mu_opp * opp_mass > own_mass)) return false;
    }
    return true;
}

SubgameSolution solve_fpa_fpa(const AdvertiserPair& pair, const MarketShares& shares) {
    AuctionProfile profile{std::vector<Format>(shares.size(), Format::FPA)};
    return solve_per_platform(pair, profile, shares);
}

SubgameSolution solve_spa_spa(const AdvertiserPair& pair, const MarketShares& shares,
                              const numerics::NumericsConfig& cfg) {
    AuctionProfile profile{std::vector<Format>(shares.size(), Format::SPA)};
    return solve_per_platform(pair, profile, shares, cfg);
}

SubgameSolution solve_fpa_spa(const AdvertiserPair& pair, const MarketShares& shares,
                              const numerics::NumericsConfig& cfg) {
    if (shares.size() != 2) {
        throw Error(ErrorKind::ConfigError, "solve_fpa_spa expects two platforms");
    }
    return solve_per_platform(pair, AuctionProfile{{Format::FPA, Format::SPA}}, shares, cfg);
}

SubgameSolution solve_per_platform(const AdvertiserPair& pair, const AuctionProfile& profile,
                                   const MarketShares& shares,
                                   const numerics::NumericsConfig& cfg) {
    check_pair_shares(profile, shares);
    cfg.validate();
    const auto w = shares.weights();
    const auto g = group_weights(profile, w);

    if (g.spa == 0.0) {
        SubgameSolution s = evaluate_profile(pair, profile, w, expand(profile, 1, 1, 1, 1));
        add_structure_flags(pair, s);
        return s;
    }

    const double lo = kEdge;
    const double hi = scan_hi(pair);

    if (g.fpa == 0.0) {
        const auto r = [&](double q) { return spa_spa_residual(pair, q); };
        const auto roots = numerics::find_all_roots(r, lo, hi, kScanCells, cfg);
        if (roots.empty()) {
            throw Error(ErrorKind::NoInteriorEquilibrium,
                        "no interior SPA-SPA threshold: one advertiser wins everything");
        }
        const double q = roots.front();
        const double m2 = pair.tail(1, q) / pair.tail(2, q);
        const double m1 = pair.head(2, q) / pair.head(1, q);
        SubgameSolution s = evaluate_profile(pair, profile, w, expand(profile, m1, m2, m1, m2));
        s.residual = std::abs(r(q));
        add_structure_flags(pair, s);
        if (roots.size() > 1) add_flag(s, "multiple_equilibria");
        return s;
    }

    const auto r = [&](double qF) { return fpa_spa_point(pair, g.fpa, g.spa, qF).residual; };
    const auto roots = numerics::find_all_roots(r, lo, hi, kScanCells, cfg);
    if (roots.empty()) {
        throw Error(ErrorKind::NoInteriorEquilibrium, "FPA-SPA reduction has no interior root");
    }
    const FpaSpaPoint p = fpa_spa_point(pair, g.fpa, g.spa, roots.front());
    if (!(p.m1F > 0.0 && p.m2F > 0.0 && p.m1S > 0.0 && p.m2S > 0.0)) {
        throw Error(ErrorKind::DegenerateSolution, "FPA-SPA solution has a non-positive multiplier");
    }
    SubgameSolution s =
        evaluate_profile(pair, profile, w, expand(profile, p.m1F, p.m2F, p.m1S, p.m2S));
    s.elasticity_1 = p.e1;
    s.elasticity_2 = p.e2;
    s.residual = std::abs(p.residual);
    add_structure_flags(pair, s);
    const double end = pair.upper();
    if (!(pair.v1().eval(0.0) == 0.0 &&
          (std::isinf(end) ? true : pair.v2().eval(end) == 0.0))) {
        add_flag(s, "uniqueness_unverified");
    }
    if (roots.size() > 1) add_flag(s, "multiple_equilibria");
    return s;
}

SubgameSolution solve_uniform_mode(const AdvertiserPair& pair, const AuctionProfile& profile,
                                   const MarketShares& shares,
                                   const numerics::NumericsConfig& cfg) {
    check_pair_shares(profile, shares);
    cfg.validate();
    const auto w = shares.weights();
    const auto g = group_weights(profile, w);
    const std::size_t n = profile.size();

    double m1 = 1.0;
    double m2 = 1.0;
    int iter = 0;
    bool converged = g.spa == 0.0;
    const int limit = std::max(cfg.max_iter, 10);
    while (!converged) {
        if (iter >= limit) {
            throw Error(ErrorKind::NoConvergence,
                        "uniform best responses did not settle within max_iter rounds");
        }
        ++iter;
        const double n1 = uniform_best_response(pair, g, 1, m2, cfg);
        const double n2 = uniform_best_response(pair, g, 2, n1, cfg);
        const double change = std::max(rel_diff(n1, m1), rel_diff(n2, m2));
        m1 = n1;
        m2 = n2;
        converged = change <= 1e-13;
    }
    SubgameSolution s = evaluate_profile(pair, profile, w,
                                         {std::vector<double>(n, m1), std::vector<double>(n, m2)},
                                         BiddingMode::Uniform);
    s.iterations = iter;
    s.residual = std::max(std::abs(uniform_slack(pair, g, 1, m1, m2)),
                          std::abs(uniform_slack(pair, g, 2, m2, m1)));
    add_structure_flags(pair, s);
    return s;
}

SubgameSolution solve_single_strategic(const ValuationSpec& strategic,
                                       const std::vector<ValuationSpec>& static_curves,
                                       const AuctionProfile& profile, const MarketShares& shares,
                                       const numerics::NumericsConfig& cfg) {
    check_pair_shares(profile, shares);
    cfg.validate();
    if (static_curves.size() != profile.size()) {
        throw Error(ErrorKind::ConfigError, "one static curve per platform is required");
    }
    const std::size_t n = profile.size();
    const auto w = shares.weights();
    std::vector<StaticPlatform> plats;
    for (std::size_t j = 0; j < n; ++j) {
        if (static_curves[j].domain() != strategic.domain()) {
            throw Error(ErrorKind::DomainError, "static curves must share the strategic domain");
        }
        const double hi = strategic.domain() == Domain::Unit ? 1.0 : 60.0;
        plats.push_back({&strategic, &static_curves[j], w[j], hi});
    }

    const auto bids_at = [&](double k) {
        std::vector<double> mu(n);
        for (std::size_t j = 0; j < n; ++j) {
            mu[j] = profile.formats[j] == Format::SPA ? k : plats[j].fpa_bid(k);
        }
        return mu;
    };
    const auto gap = [&](const std::vector<double>& mu) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            total += plats[j].cost(profile.formats[j], mu[j]) - plats[j].value(mu[j]);
        }
        return total;
    };
    const auto saturated = [&](const std::vector<double>& mu) {
        for (std::size_t j = 0; j < n; ++j) {
            if (plats[j].value(mu[j]) < plats[j].full_value() * (1.0 - 1e-12)) return false;
        }
        return true;
    };

    // Largest marginal-cost level whose bids keep spend within value.
    double k_lo = 1.0;
    double k_hi = 2.0;
    bool capped = false;
    while (gap(bids_at(k_hi)) <= 0.0) {
        k_lo = k_hi;
        if (saturated(bids_at(k_hi)) || k_hi > 1e6) {
            capped = true;
            break;
        }
        k_hi *= 2.0;
    }
    if (!capped) {
        for (int it = 0; it < 200 && (k_hi - k_lo) > 1e-14 * k_hi; ++it) {
            const double mid = 0.5 * (k_lo + k_hi);
            (gap(bids_at(mid)) <= 0.0 ? k_lo : k_hi) = mid;
        }
    }
    std::vector<double> mu = bids_at(k_lo);

    SubgameSolution s;
    s.mode = BiddingMode::SingleStrategic;
    s.profile = profile;
    s.weights = w;

    // Spend any slack left on fully won FPA platforms: the bidder is
    // indifferent there and the undominated choice bids up to its target.
    double slack = -gap(mu);
    std::vector<std::size_t> full_fpa;
    for (std::size_t j = 0; j < n; ++j) {
        if (profile.formats[j] == Format::FPA &&
            plats[j].value(mu[j]) >= plats[j].full_value() * (1.0 - 1e-12)) {
            full_fpa.push_back(j);
        }
    }
    if (slack > 1e-14 && !full_fpa.empty()) {
        const auto extra = [&](double floor) {
            double e = 0.0;
            for (std::size_t j : full_fpa) {
                e += (std::max(mu[j], floor) - mu[j]) * plats[j].full_value();
            }
            return e - slack;
        };
        double hi = 1.0;
        while (extra(hi) < 0.0) hi *= 2.0;
        const double floor = numerics::find_root(extra, 0.0, hi, cfg);
        for (std::size_t j : full_fpa) mu[j] = std::max(mu[j], floor);
        add_flag(s, "saturated_fpa_raised");
    }
    if (capped) add_flag(s, "saturated");

    s.multipliers[0] = mu;
    s.multipliers[1] = std::vector<double>(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& pl = plats[j];
        const auto set = pl.won(mu[j]);
        const double value = pl.integrate(strategic, set);
        const double static_won = pl.integrate(static_curves[j], set);
        const double static_value = pl.full_static() - static_won;
        const double strategic_lost = pl.full_value() - value;
        double pay_strategic;
        double pay_static;
        if (profile.formats[j] == Format::FPA) {
            pay_strategic = mu[j] * value;
            pay_static = static_value;
        } else {
            pay_strategic = static_won;
            pay_static = mu[j] * strategic_lost;
        }
        s.value[0] += value;
        s.spend[0] += pay_strategic;
        s.value[1] += static_value;
        s.spend[1] += pay_static;
        s.revenue.push_back(pay_strategic + pay_static);
        s.thresholds.push_back(set.empty() ? kNaN : set.front().first);

        double mc = mu[j];
        if (profile.formats[j] == Format::FPA) {
            const double slope = pl.slope(mu[j]);
            mc = slope > 0.0 ? mu[j] + value / slope : kNaN;
        }
        s.marginal_costs[0].push_back(mc);
        s.marginal_costs[1].push_back(1.0);
    }
    s.residual = std::abs(s.spend[0] - s.value[0]);
    return s;
}

SolutionDiagnostics diagnose(const AdvertiserPair& pair, const SubgameSolution& s,
                             const numerics::NumericsConfig& cfg) {
    SolutionDiagnostics d;
    for (int i = 0; i < 2; ++i) {
        if (s.value[i] > 0.0) {
            d.target_gap = std::max(d.target_gap,
                                    std::abs(s.spend[i] - s.value[i]) / std::max(1.0, s.value[i]));
        }
    }
    const std::size_t n = s.profile.size();
    if (s.mode == BiddingMode::PerPlatform) {
        for (int i = 0; i < 2; ++i) {
            double lo = kInf;
            double hi = -kInf;
            for (std::size_t j = 0; j < n; ++j) {
                const double q = s.thresholds[j];
                const bool wins = i == 0 ? q < pair.upper() : q > 0.0;
                const double mc = s.marginal_costs[i][j];
                if (!wins || !std::isfinite(mc)) continue;
                lo = std::min(lo, mc);
                hi = std::max(hi, mc);
            }
            if (hi >= lo) d.mc_spread = std::max(d.mc_spread, (hi - lo) / hi);
        }
    }
    std::array<double, 2> spend{};
    double welfare = 0.0;
    const double q_eff = pair.threshold(1.0, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double m1 = s.multipliers[0][j];
        const double m2 = s.multipliers[1][j];
        const double q = s.thresholds[j];
        const double w = s.weights[j];
        const bool fpa = s.profile.formats[j] == Format::FPA;
        const auto& v1 = pair.v1();
        const auto& v2 = pair.v2();
        const numerics::RealFunction pay1 = [&](double z) {
            return fpa ? m1 * v1.eval(z) : m2 * v2.eval(z);
        };
        const numerics::RealFunction pay2 = [&](double z) {
            return fpa ? m2 * v2.eval(z) : m1 * v1.eval(z);
        };
        if (q < pair.upper()) spend[0] += w * numerics::integrate(pay1, q, pair.upper(), cfg);
        if (q > 0.0) spend[1] += w * numerics::integrate(pay2, 0.0, q, cfg);
        if (q > 0.0 && q < pair.upper()) {
            d.threshold_gap =
                std::max(d.threshold_gap, std::abs(m1 * v1.eval(q) - m2 * v2.eval(q)));
        }
        welfare += w * (pair.head(2, q_eff) + pair.tail(1, q_eff));
    }
    for (int i = 0; i < 2; ++i) {
        d.payment_gap = std::max(d.payment_gap, std::abs(spend[i] - s.spend[i]));
    }
    d.welfare_excess = s.total_revenue() - welfare;
    return d;
}

}  // namespace bidwars
