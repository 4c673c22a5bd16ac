#include "bidwars/casestudies.hpp"

#include <cmath>
#include <limits>

#include "bidwars/errors.hpp"
#include "bidwars/numerics.hpp"

namespace bidwars {

namespace {

// Admissible interval of the septic root, padded for the rounding of its ends.
constexpr double kSepticPad = 2e-4;

const AuctionProfile kFF{{Format::FPA, Format::FPA}};
const AuctionProfile kSS{{Format::SPA, Format::SPA}};
const AuctionProfile kFS{{Format::FPA, Format::SPA}};

SubgameSolution two_platforms(const AdvertiserPair& pair, const AuctionProfile& profile,
                              double m1F, double m2F, double m1S, double m2S) {
    std::array<std::vector<double>, 2> mu;
    for (Format f : profile.formats) {
        mu[0].push_back(f == Format::FPA ? m1F : m1S);
        mu[1].push_back(f == Format::FPA ? m2F : m2S);
    }
    SubgameSolution s = evaluate_profile(pair, profile, {1.0, 1.0}, mu);
    s.flags.push_back("closed_form");
    return s;
}

}  // namespace

AdvertiserPair lincon_pair(double alpha) {
    return {ValuationSpec::affine(alpha, 0.0), ValuationSpec::constant(1.0)};
}

double lincon_septic(double a, double x) {
    const double x2 = x * x;
    const double x3 = x2 * x;
    const double x4 = x3 * x;
    return 17 * a * x4 * x3 - 17 * x3 * x3 + 4 * x4 * x - 17 * x4 + (8 - 3 * a) * x3 + x2 +
           (4 - 2 * a) * x + 1;
}

double lincon_alpha_of_x(double x) {
    const double x2 = x * x;
    const double x3 = x2 * x;
    const double x4 = x3 * x;
    const double num = 17 * x3 * x3 - 4 * x4 * x + 17 * x4 - 8 * x3 - x2 - 4 * x - 1;
    const double den = 17 * x4 * x3 - 3 * x3 - 2 * x;
    return num / den;
}

double lincon_q_fpa(double alpha) {
    if (!(alpha > 2.0 && alpha < 4.0)) {
        throw Error(ErrorKind::RangeError, "linear-vs-constant case needs alpha in (2, 4)");
    }
    const auto f = [alpha](double x) { return lincon_septic(alpha, x); };
    const auto roots =
        numerics::find_all_roots(f, kLinconXLow - kSepticPad, kLinconXHigh + kSepticPad, 512);
    if (roots.empty()) {
        throw Error(ErrorKind::NoInteriorEquilibrium, "septic has no admissible root");
    }
    double best = roots.front();
    for (double r : roots) {
        if (std::abs(lincon_alpha_of_x(r) - alpha) < std::abs(lincon_alpha_of_x(best) - alpha)) {
            best = r;
        }
    }
    return best;
}

LinearConstantCase lincon_solve(double alpha) {
    LinearConstantCase c;
    c.alpha = alpha;
    const double x = lincon_q_fpa(alpha);
    const double x2 = x * x;
    c.q_F = x;
    c.q_S = 4.0 * x2 * x / (1.0 + x2);
    c.q_SS = 4.0 / alpha - 1.0;
    c.rev_fpa_fpa = (alpha * alpha + 1.0) / (2.0 * alpha);
    c.rev_spa_spa = 3.0 - 4.0 / alpha;
    c.rev_fpa = (1.0 + x2) / (2.0 * x);
    c.rev_spa = 2.0 - c.q_S;

    const AdvertiserPair pair = lincon_pair(alpha);
    c.fpa_fpa = two_platforms(pair, kFF, 1, 1, 1, 1);
    c.spa_spa = two_platforms(pair, kSS, 0, 0, 2.0 / (4.0 - alpha), 2.0);
    const double m1F = 1.0 / (alpha * x);
    const double m1S = (1.0 + x2) / (2.0 * alpha * x2 * x);
    c.fpa_spa = two_platforms(pair, kFS, m1F, 1.0, m1S, 2.0);
    c.fpa_spa.elasticity_1 = m1S / m1F;
    c.fpa_spa.elasticity_2 = 2.0;
    return c;
}

LinconThresholds lincon_thresholds() {
    const auto x_minus_z = [](double a) {
        const double q = lincon_q_fpa(a);
        return (3.0 - 4.0 / a) - (1.0 + q * q) / (2.0 * q);
    };
    const auto w_minus_y = [](double a) {
        const double q = lincon_q_fpa(a);
        const double qS = 4.0 * q * q * q / (1.0 + q * q);
        return (a * a + 1.0) / (2.0 * a) - (2.0 - qS);
    };
    numerics::NumericsConfig cfg;
    cfg.root_abs_tol = 1e-10;
    const auto xz = numerics::find_all_roots(x_minus_z, 2.01, 3.99, 198, cfg);
    const auto wy = numerics::find_all_roots(w_minus_y, 2.01, 3.99, 198, cfg);
    if (xz.size() != 2 || wy.size() != 1) {
        throw Error(ErrorKind::NoInteriorEquilibrium, "unexpected number of phase boundaries");
    }
    return {xz[0], wy[0], xz[1]};
}

AdvertiserPair exp_pair(double alpha) {
    return {ValuationSpec::exp_decay(alpha, 1.0), ValuationSpec::exp_decay(1.0, 2.0)};
}

double exp_u_of_t(double t) { return 8.0 * t * t * t / (3.0 - t * t); }

double exp_alpha_of_t(double t) {
    if (!(t > 0.0 && t < 0.7)) throw Error(ErrorKind::RangeError, "alpha(t) needs t in (0, 0.7)");
    const double u = exp_u_of_t(t);
    const double t2 = t * t;
    return (2.0 - u * u - t2) * (t2 + 2.0 * u * t) / ((1.0 - t2 + 8.0 * t - 8.0 * t * u) * (u + t));
}

double exp_t_of_alpha(double alpha) {
    const auto f = [alpha](double t) { return exp_alpha_of_t(t) - alpha; };
    constexpr double lo = 0.3;
    constexpr double hi = 0.65;
    if (!(f(lo) <= 0.0 && f(hi) >= 0.0)) {
        throw Error(ErrorKind::RangeError, "alpha outside the range of alpha(t) on (0.3, 0.65)");
    }
    return numerics::find_root(f, lo, hi);
}

ExponentialCase exp_solve(double alpha) {
    if (!(alpha > 0.25 && alpha < 0.5)) {
        throw Error(ErrorKind::RangeError, "exponential case needs alpha in (1/4, 1/2)");
    }
    ExponentialCase c;
    c.alpha = alpha;
    c.t = exp_t_of_alpha(alpha);
    const double t = c.t;
    c.u = exp_u_of_t(t);
    const double u = c.u;
    c.w = (2.0 - u * u - t * t) / (1.0 - t * t + 8.0 * t - 8.0 * t * u);
    c.z = 4.0 * c.w * t / u;
    c.y = c.w * t / alpha;
    c.x = 4.0 * c.y;
    c.rev_fpa_fpa = (alpha * alpha + 1.0) / 2.0;
    c.rev_spa_spa = (3.0 - 4.0 * alpha) * alpha;
    c.rev_fpa = c.w * (1.0 + t * t) / 2.0;
    c.rev_spa = c.x * alpha - c.x * c.x * alpha * alpha / (2.0 * c.z);

    const AdvertiserPair pair = exp_pair(alpha);
    c.fpa_fpa = two_platforms(pair, kFF, 1, 1, 1, 1);
    c.spa_spa = two_platforms(pair, kSS, 0, 0, 2.0, 2.0 * alpha / (4.0 * alpha - 1.0));
    c.fpa_spa = two_platforms(pair, kFS, c.y, c.w, c.x, c.z);
    c.fpa_spa.elasticity_1 = 4.0;
    c.fpa_spa.elasticity_2 = c.z / c.w;
    return c;
}

std::array<double, 4> exp_system_residuals(double a, double x, double y, double z, double w) {
    const double t2 = y * y * a * a / (w * w);
    const double xz = x * a / z;
    return {
        x / y - 4.0,
        z / w - (1.0 + 1.5 * (1.0 - t2) / t2),
        (y - 1.0) * a * a * y / w - (a * a * x / z - z * xz * xz / 2.0),
        (w - 1.0) * (1.0 - t2) / 2.0 - ((1.0 - xz * xz) / 2.0 - x * a * (1.0 - xz)),
    };
}

std::vector<DominanceCertificate> exp_dominance_certificates(const std::vector<double>& t_grid) {
    std::vector<DominanceCertificate> out;
    for (double t : t_grid) {
        if (!(t > 0.0 && t < 0.7)) throw Error(ErrorKind::RangeError, "t outside (0, 0.7)");
        const double u = exp_u_of_t(t);
        const double w = (2.0 - u * u - t * t) / (1.0 - t * t + 8.0 * t - 8.0 * t * u);
        out.push_back({t, w - 1.0 / (1.0 + t * t), 4.0 * w * t * (1.0 - u / 2.0) - 5.0 / 8.0});
    }
    return out;
}

}  // namespace bidwars
