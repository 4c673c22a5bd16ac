#include "bidwars/valuation.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>
#include <vector>

#include "bidwars/errors.hpp"

namespace bidwars {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDomainSlack = 1e-12;
constexpr int kMonotoneSamples = 256;
constexpr double kHalfLineScan = 60.0;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& msg) {
    if (!ok) throw Error(ErrorKind::DomainError, msg);
}

int check_advertiser(int advertiser) {
    if (advertiser != 1 && advertiser != 2) {
        throw Error(ErrorKind::DomainError, "advertiser index must be 1 or 2");
    }
    return advertiser;
}

/// Interior sample points of a domain; the half line is sampled on
/// [0, kHalfLineScan].
std::vector<double> interior_samples(Domain domain, int n) {
    const double hi = domain == Domain::Unit ? 1.0 : kHalfLineScan;
    std::vector<double> pts;
    pts.reserve(n);
    for (int k = 1; k <= n; ++k) {
        pts.push_back(hi * static_cast<double>(k) / (n + 1));
    }
    return pts;
}

}  // namespace

ValuationSpec::ValuationSpec(Family family, Domain domain, double scale)
    : family_(std::move(family)), domain_(domain), scale_(scale) {
    require(scale_ > 0.0 && std::isfinite(scale_), "valuation scale must be positive");
}

ValuationSpec ValuationSpec::monomial(double exponent, Domain domain) {
    require(exponent >= 0.0, "monomial exponent must be non-negative");
    return {Monomial{exponent}, domain, 1.0};
}

ValuationSpec ValuationSpec::affine(double slope, double intercept, Domain domain) {
    require(intercept >= 0.0, "affine valuation must be non-negative at q = 0");
    if (domain == Domain::Unit) {
        require(slope + intercept >= -kDomainSlack, "affine valuation must be non-negative at q = 1");
    } else {
        require(slope >= 0.0, "affine valuation on the half line needs a non-negative slope");
    }
    return {Affine{slope, intercept}, domain, 1.0};
}

ValuationSpec ValuationSpec::constant(double level, Domain domain) {
    require(level >= 0.0, "constant valuation must be non-negative");
    return {Constant{level}, domain, 1.0};
}

ValuationSpec ValuationSpec::exp_decay(double alpha, double rate, Domain domain) {
    require(alpha > 0.0 && rate > 0.0, "exp_decay needs alpha > 0 and rate > 0");
    return {ExpDecay{alpha, rate}, domain, 1.0};
}

ValuationSpec ValuationSpec::exp_growth(double alpha, Domain domain) {
    require(alpha > 0.0, "exp_growth needs alpha > 0");
    return {ExpGrowth{alpha}, domain, 1.0};
}

ValuationSpec ValuationSpec::saturating(double rate, Domain domain) {
    require(rate > 0.0, "saturating needs rate > 0");
    return {Saturating{rate}, domain, 1.0};
}

ValuationSpec ValuationSpec::mirror_of(const ValuationSpec& base) {
    require(base.domain() == Domain::Unit, "a mirrored valuation needs the unit domain");
    return {Mirror{std::make_shared<const ValuationSpec>(base)}, Domain::Unit, 1.0};
}

ValuationSpec ValuationSpec::scaled(double c) const {
    require(c > 0.0, "scale factor must be positive");
    return {family_, domain_, scale_ * c};
}

double ValuationSpec::upper() const noexcept {
    return domain_ == Domain::Unit ? 1.0 : kInf;
}

bool ValuationSpec::is_mirror() const noexcept {
    return std::holds_alternative<Mirror>(family_);
}

void ValuationSpec::check_domain(double q) const {
    if (std::isnan(q) || q < -kDomainSlack || q > upper() + kDomainSlack) {
        std::ostringstream os;
        os << "query " << q << " outside the domain of " << describe();
        throw Error(ErrorKind::DomainError, os.str());
    }
}

double ValuationSpec::eval(double q) const {
    check_domain(q);
    q = std::max(q, 0.0);
    if (domain_ == Domain::Unit) q = std::min(q, 1.0);
    const double raw = std::visit(
        Overloaded{
            [q](const Monomial& m) { return m.exponent == 0.0 ? 1.0 : std::pow(q, m.exponent); },
            [q](const Affine& a) { return std::max(0.0, a.slope * q + a.intercept); },
            [](const Constant& c) { return c.level; },
            [q](const ExpDecay& e) { return e.alpha * std::exp(-e.rate * q); },
            [q](const ExpGrowth& e) { return std::expm1(e.alpha * q); },
            [q](const Saturating& s) { return -std::expm1(-s.rate * q); },
            [q](const Mirror& m) { return m.base->eval(1.0 - q); },
        },
        family_);
    return scale_ * raw;
}

double ValuationSpec::derivative(double q) const {
    check_domain(q);
    q = std::max(q, 0.0);
    if (domain_ == Domain::Unit) q = std::min(q, 1.0);
    const double raw = std::visit(
        Overloaded{
            [q](const Monomial& m) {
                if (m.exponent == 0.0) return 0.0;
                if (m.exponent == 1.0) return 1.0;
                return m.exponent * std::pow(q, m.exponent - 1.0);
            },
            [](const Affine& a) { return a.slope; },
            [](const Constant&) { return 0.0; },
            [q](const ExpDecay& e) { return -e.rate * e.alpha * std::exp(-e.rate * q); },
            [q](const ExpGrowth& e) { return e.alpha * std::exp(e.alpha * q); },
            [q](const Saturating& s) { return s.rate * std::exp(-s.rate * q); },
            [q](const Mirror& m) { return -m.base->derivative(1.0 - q); },
        },
        family_);
    return scale_ * raw;
}

double ValuationSpec::integral(double a, double b) const {
    check_domain(a);
    if (!std::isinf(b)) check_domain(b);
    if (b <= a) return 0.0;
    a = std::max(a, 0.0);
    if (domain_ == Domain::Unit) b = std::min(b, 1.0);

    const bool infinite = std::isinf(b);
    const double raw = std::visit(
        Overloaded{
            [&](const Monomial& m) {
                if (infinite) return kInf;
                const double p = m.exponent + 1.0;
                return (std::pow(b, p) - std::pow(a, p)) / p;
            },
            [&](const Affine& af) {
                if (infinite) return (af.slope == 0.0 && af.intercept == 0.0) ? 0.0 : kInf;
                // Clip at the zero crossing so the integral matches eval().
                double lo = a;
                double hi = b;
                if (af.slope < 0.0) {
                    const double root = -af.intercept / af.slope;
                    hi = std::min(hi, root);
                    if (hi <= lo) return 0.0;
                }
                return 0.5 * af.slope * (hi * hi - lo * lo) + af.intercept * (hi - lo);
            },
            [&](const Constant& c) {
                if (infinite) return c.level == 0.0 ? 0.0 : kInf;
                return c.level * (b - a);
            },
            [&](const ExpDecay& e) {
                const double upper_term = infinite ? 0.0 : std::exp(-e.rate * b);
                return e.alpha / e.rate * (std::exp(-e.rate * a) - upper_term);
            },
            [&](const ExpGrowth& e) {
                if (infinite) return kInf;
                return (std::exp(e.alpha * b) - std::exp(e.alpha * a)) / e.alpha - (b - a);
            },
            [&](const Saturating& s) {
                if (infinite) return kInf;
                return (b - a) - (std::exp(-s.rate * a) - std::exp(-s.rate * b)) / s.rate;
            },
            [&](const Mirror& m) { return m.base->integral(1.0 - b, 1.0 - a); },
        },
        family_);
    return scale_ * raw;
}

std::string ValuationSpec::describe() const {
    std::ostringstream os;
    std::visit(Overloaded{
                   [&](const Monomial& m) { os << "monomial(alpha=" << m.exponent << ")"; },
                   [&](const Affine& a) {
                       os << "affine(slope=" << a.slope << ", intercept=" << a.intercept << ")";
                   },
                   [&](const Constant& c) { os << "constant(level=" << c.level << ")"; },
                   [&](const ExpDecay& e) {
                       os << "exp_decay(alpha=" << e.alpha << ", rate=" << e.rate << ")";
                   },
                   [&](const ExpGrowth& e) { os << "exp_growth(alpha=" << e.alpha << ")"; },
                   [&](const Saturating& s) { os << "saturating(rate=" << s.rate << ")"; },
                   [&](const Mirror& m) { os << "mirror(" << m.base->describe() << ")"; },
               },
               family_);
    if (scale_ != 1.0) os << "*" << scale_;
    return os.str();
}

double eval(const ValuationSpec& spec, double q) { return spec.eval(q); }

double eta(const ValuationSpec& spec, double q) {
    const double v = spec.eval(q);
    if (v == 0.0) {
        throw Error(ErrorKind::SingularElasticity, "eta undefined where the valuation is zero");
    }
    return std::abs(spec.derivative(q) / v);
}

AdvertiserPair::AdvertiserPair(ValuationSpec v1, ValuationSpec v2)
    : v1_(std::move(v1)), v2_(std::move(v2)) {
    require(v1_.domain() == v2_.domain(), "advertiser valuations must share one domain");
    const auto pts = interior_samples(domain(), kMonotoneSamples);
    double prev_h = -kInf;
    double prev_v1 = -kInf;
    double prev_v2 = kInf;
    for (double q : pts) {
        const double a = v1_.eval(q);
        const double b = v2_.eval(q);
        if (a == 0.0 && b == 0.0) continue;
        const double hq = b == 0.0 ? kInf : a / b;
        if (!(hq >= prev_h * (1.0 - 1e-12) - 1e-300) && !(std::isinf(prev_h) && prev_h < 0)) {
            throw Error(ErrorKind::DomainError,
                        "h = v1/v2 must be non-decreasing (violated near q = " +
                            std::to_string(q) + ")");
        }
        if (a < prev_v1 * (1.0 - 1e-12) || b > prev_v2 * (1.0 + 1e-12)) {
            monotone_valuations_ = false;
        }
        prev_h = hq;
        prev_v1 = a;
        prev_v2 = b;
    }
}

const ValuationSpec& AdvertiserPair::v(int advertiser) const {
    return check_advertiser(advertiser) == 1 ? v1_ : v2_;
}

double AdvertiserPair::scan_upper() const noexcept {
    return domain() == Domain::Unit ? 1.0 : kHalfLineScan;
}

double AdvertiserPair::h(double q) const {
    const double b = v2_.eval(q);
    const double a = v1_.eval(q);
    if (b == 0.0) return a == 0.0 ? std::numeric_limits<double>::quiet_NaN() : kInf;
    return a / b;
}

double AdvertiserPair::threshold(double mu1, double mu2) const {
    if (!(mu1 > 0.0) || !(mu2 > 0.0)) {
        throw Error(ErrorKind::DomainError, "bid multipliers must be positive");
    }
    // Log-gap is monotone in q and well scaled for exponential families.
    const auto gap = [&](double q) {
        const double a = v1_.eval(q);
        const double b = v2_.eval(q);
        const double la = a > 0.0 ? std::log(mu1 * a) : -kInf;
        const double lb = b > 0.0 ? std::log(mu2 * b) : -kInf;
        if (std::isinf(la) && std::isinf(lb)) return 0.0;
        return la - lb;
    };
    const double lo = 0.0;
    const double hi = scan_upper();
    if (gap(lo) >= 0.0) return lo;
    if (gap(hi) < 0.0) return upper();
    return numerics::find_root(gap, lo, hi);
}

double AdvertiserPair::tail(int advertiser, double q) const {
    return v(advertiser).integral(q, upper());
}

double AdvertiserPair::head(int advertiser, double q) const {
    return v(advertiser).integral(0.0, q);
}

bool AdvertiserPair::h_convex() const {
    const auto pts = interior_samples(domain(), kMonotoneSamples);
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        const double a = h(pts[k - 1]);
        const double b = h(pts[k]);
        const double c = h(pts[k + 1]);
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) continue;
        if (a - 2.0 * b + c < -1e-9 * (std::abs(a) + std::abs(b) + std::abs(c))) return false;
    }
    return true;
}

bool AdvertiserPair::is_structural_mirror() const noexcept {
    const auto mirrors = [](const ValuationSpec& m, const ValuationSpec& base) {
        const auto* fam = std::get_if<ValuationSpec::Mirror>(&m.family());
        return fam != nullptr && m.scale() == 1.0 &&
               fam->base->describe() == base.describe();
    };
    return mirrors(v2_, v1_) || mirrors(v1_, v2_);
}

double efficient_threshold(const AdvertiserPair& pair) {
    const double q = pair.threshold(1.0, 1.0);
    if (q <= 0.0 || q >= pair.upper()) {
        throw Error(ErrorKind::NoInteriorCrossing,
                    "v1 - v2 does not change sign inside the domain");
    }
    return q;
}

double elasticity(const AdvertiserPair& pair, int advertiser, double q) {
    check_advertiser(advertiser);
    const double eta_sum = eta(pair.v1(), q) + eta(pair.v2(), q);
    const ValuationSpec& vi = pair.v(advertiser);
    const double vq = vi.eval(q);
    if (vq == 0.0) {
        throw Error(ErrorKind::SingularElasticity, "elasticity undefined where v_i(q) = 0");
    }
    const double mass = advertiser == 1 ? pair.tail(1, q) : pair.head(2, q);
    if (!std::isfinite(mass)) {
        throw Error(ErrorKind::DivergentElasticity, "elasticity integral diverges");
    }
    return 1.0 + eta_sum * mass / vq;
}

}  // namespace bidwars
