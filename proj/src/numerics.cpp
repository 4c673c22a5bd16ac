#include "bidwars/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bidwars/errors.hpp"

namespace bidwars::numerics {

namespace {

constexpr int kMaxSimpsonDepth = 50;

struct SimpsonState {
    const RealFunction& f;
    int failures = 0;
};

double simpson_step(SimpsonState& st, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    if (depth >= kMaxSimpsonDepth || !std::isfinite(delta)) {
        ++st.failures;
        return left + right + delta / 15.0;
    }
    // Interval halving keeps the local tolerance proportional to width; the
    // floor stops tolerance underflow on deep refinements.
    const double sub_tol = std::max(0.5 * tol, 1e-300);
    return simpson_step(st, a, m, fa, flm, fm, left, sub_tol, depth + 1) +
           simpson_step(st, m, b, fm, frm, fb, right, sub_tol, depth + 1);
}

double adaptive_simpson(const RealFunction& f, double a, double b, double tol) {
    SimpsonState st{f};
    const double fa = f(a);
    const double fb = f(b);
    // Seed with four panels so symmetric integrands do not fool the first
    // error estimate.
    double total = 0.0;
    constexpr int kPanels = 4;
    const double width = (b - a) / kPanels;
    double left = a;
    double f_left = fa;
    for (int k = 0; k < kPanels; ++k) {
        const double right = (k + 1 == kPanels) ? b : a + (k + 1) * width;
        const double f_right = (k + 1 == kPanels) ? fb : f(right);
        const double mid = 0.5 * (left + right);
        const double f_mid = f(mid);
        const double whole = (right - left) / 6.0 * (f_left + 4.0 * f_mid + f_right);
        total += simpson_step(st, left, right, f_left, f_mid, f_right, whole,
                              tol / kPanels, 0);
        left = right;
        f_left = f_right;
    }
    if (st.failures > 0 || !std::isfinite(total)) {
        throw Error(ErrorKind::QuadratureError,
                    "adaptive quadrature did not converge on [" + std::to_string(a) +
                        ", " + std::to_string(b) + "]");
    }
    return total;
}

int sign_of(double v) {
    if (std::isnan(v)) return 0;
    return (v > 0.0) - (v < 0.0);
}

}  // namespace

void NumericsConfig::validate() const {
    if (!(quad_abs_tol > 0.0) || !(root_abs_tol > 0.0)) {
        throw Error(ErrorKind::ConfigError, "numerics tolerances must be positive");
    }
    if (max_iter < 10) {
        throw Error(ErrorKind::ConfigError, "numerics.max_iter must be at least 10");
    }
    if (grid_fallback_points < 2) {
        throw Error(ErrorKind::ConfigError,
                    "numerics.grid_fallback_points must be at least 2");
    }
}

double integrate(const RealFunction& f, double a, double b, const NumericsConfig& cfg) {
    if (!(a <= b)) {
        throw Error(ErrorKind::DomainError, "integrate: lower limit exceeds upper limit");
    }
    if (a == b) return 0.0;
    if (std::isinf(b)) {
        const RealFunction mapped = [&f, a](double t) {
            if (t >= 1.0) return 0.0;
            const double s = 1.0 - t;
            const double v = f(a + t / s) / (s * s);
            return std::isfinite(v) ? v : 0.0;
        };
        return adaptive_simpson(mapped, 0.0, 1.0, cfg.quad_abs_tol);
    }
    return adaptive_simpson(f, a, b, cfg.quad_abs_tol);
}

double find_root(const RealFunction& f, double lo, double hi, const NumericsConfig& cfg) {
    if (lo > hi) std::swap(lo, hi);
    double a = lo;
    double b = hi;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    const int sa = sign_of(fa);
    const int sb = sign_of(fb);
    if (sa == 0 || sb == 0 || sa == sb) {
        throw Error(ErrorKind::BracketError,
                    "find_root: no sign change on [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int iter = 0; iter < std::max(cfg.max_iter, 400); ++iter) {
        if (sign_of(fb) == sign_of(fc)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        const bool finite_vals = std::isfinite(fb) && std::isfinite(fc);
        if (finite_vals && std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        } else if (!std::isfinite(fb) && std::isfinite(fc)) {
            // Keep the finite endpoint as the current best estimate.
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * eps * std::abs(b) + 0.5 * cfg.root_abs_tol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) {
            return b;
        }
        const bool can_interpolate = std::isfinite(fa) && std::isfinite(fb) &&
                                     std::isfinite(fc) && std::abs(e) >= tol &&
                                     std::abs(fa) > std::abs(fb);
        if (can_interpolate) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            } else {
                p = -p;
            }
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if (std::isnan(fb)) {
            throw Error(ErrorKind::BracketError, "find_root: function returned NaN");
        }
    }
    return b;
}

std::vector<double> find_all_roots(const RealFunction& f, double lo, double hi,
                                   int n_subdiv, const NumericsConfig& cfg) {
    if (n_subdiv < 2) {
        throw Error(ErrorKind::ConfigError, "find_all_roots: n_subdiv must be at least 2");
    }
    std::vector<double> roots;
    const double step = (hi - lo) / n_subdiv;
    double x_prev = lo;
    double f_prev = f(lo);
    if (f_prev == 0.0) roots.push_back(lo);
    for (int k = 1; k <= n_subdiv; ++k) {
        const double x = (k == n_subdiv) ? hi : lo + k * step;
        const double fx = f(x);
        if (fx == 0.0) {
            roots.push_back(x);
        } else if (f_prev != 0.0 && !std::isnan(f_prev) && !std::isnan(fx) &&
                   sign_of(f_prev) != sign_of(fx)) {
            roots.push_back(find_root(f, x_prev, x, cfg));
        }
        x_prev = x;
        f_prev = fx;
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

double golden_max(const RealFunction& f, double lo, double hi, double x_tol, int max_iter) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        // Ties move right so flat plateaus resolve toward the larger argument.
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace bidwars::numerics
