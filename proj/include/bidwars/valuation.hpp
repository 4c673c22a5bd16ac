#pragma once

#include <memory>
#include <string>
#include <variant>

#include "bidwars/numerics.hpp"

namespace bidwars {

/// Query space of a valuation: the unit interval or the half line [0, inf).
enum class Domain { Unit, HalfLine };

/// A closed-form valuation curve v(q) = scale * family(q).
///
/// Every family carries its exact derivative and antiderivative, so solvers
/// never need to differentiate or integrate numerically. Values are immutable
/// and cheap to copy (mirrors share their base through a shared_ptr).
class ValuationSpec {
public:
    struct Monomial { double exponent; };               // q^exponent
    struct Affine { double slope; double intercept; };  // slope*q + intercept
    struct Constant { double level; };
    struct ExpDecay { double alpha; double rate; };     // alpha * e^{-rate q}
    struct ExpGrowth { double alpha; };                 // e^{alpha q} - 1
    struct Saturating { double rate; };                 // 1 - e^{-rate q}
    struct Mirror { std::shared_ptr<const ValuationSpec> base; };  // base(1 - q)

    using Family =
        std::variant<Monomial, Affine, Constant, ExpDecay, ExpGrowth, Saturating, Mirror>;

    static ValuationSpec monomial(double exponent, Domain domain = Domain::Unit);
    static ValuationSpec affine(double slope, double intercept, Domain domain = Domain::Unit);
    static ValuationSpec constant(double level, Domain domain = Domain::Unit);
    static ValuationSpec exp_decay(double alpha, double rate, Domain domain = Domain::HalfLine);
    static ValuationSpec exp_growth(double alpha, Domain domain = Domain::Unit);
    static ValuationSpec saturating(double rate, Domain domain = Domain::Unit);
    static ValuationSpec mirror_of(const ValuationSpec& base);

    /// Same curve multiplied by c > 0.
    [[nodiscard]] ValuationSpec scaled(double c) const;

    [[nodiscard]] double eval(double q) const;
    [[nodiscard]] double operator()(double q) const { return eval(q); }
    [[nodiscard]] double derivative(double q) const;

    /// Exact integral over [a, b]; `b` may be +infinity (returns +infinity when
    /// the tail diverges).
    [[nodiscard]] double integral(double a, double b) const;

    [[nodiscard]] Domain domain() const noexcept { return domain_; }
    [[nodiscard]] double upper() const noexcept;
    [[nodiscard]] const Family& family() const noexcept { return family_; }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] bool is_mirror() const noexcept;
    [[nodiscard]] std::string describe() const;

private:
    ValuationSpec(Family family, Domain domain, double scale);
    void check_domain(double q) const;

    Family family_;
    Domain domain_;
    double scale_ = 1.0;
};

/// v(q); throws DomainError outside the curve's domain.
double eval(const ValuationSpec& spec, double q);

/// |v'(q) / v(q)|; throws SingularElasticity when v(q) = 0.
double eta(const ValuationSpec& spec, double q);

/// Two advertisers sharing one query domain, ordered so that the value ratio
/// h(q) = v1(q) / v2(q) is non-decreasing.
class AdvertiserPair {
public:
    /// Validates the shared domain and samples h for monotonicity on 256
    /// interior points; throws DomainError otherwise.
    AdvertiserPair(ValuationSpec v1, ValuationSpec v2);

    [[nodiscard]] const ValuationSpec& v1() const noexcept { return v1_; }
    [[nodiscard]] const ValuationSpec& v2() const noexcept { return v2_; }
    [[nodiscard]] const ValuationSpec& v(int advertiser) const;
    [[nodiscard]] Domain domain() const noexcept { return v1_.domain(); }
    [[nodiscard]] double upper() const noexcept { return v1_.upper(); }

    /// Finite right end used when scanning the domain for roots.
    [[nodiscard]] double scan_upper() const noexcept;

    [[nodiscard]] double h(double q) const;

    /// Query threshold q(mu1, mu2): advertiser 1 wins (q*, end], advertiser 2
    /// wins [0, q*). Returns 0 when advertiser 1 outbids everywhere and upper()
    /// when it never does.
    [[nodiscard]] double threshold(double mu1, double mu2) const;

    /// Integrals of v_i over the part of the domain each advertiser wins for a
    /// threshold at q: tail = [q, end], head = [0, q].
    [[nodiscard]] double tail(int advertiser, double q) const;
    [[nodiscard]] double head(int advertiser, double q) const;

    /// v1 non-decreasing and v2 non-increasing on the sampled grid. The
    /// elasticity-based marginal-cost formulas assume this.
    [[nodiscard]] bool monotone_valuations() const noexcept { return monotone_valuations_; }

    /// Sampled convexity of h on the interior (used for uniqueness flags).
    [[nodiscard]] bool h_convex() const;

    /// True when v2 is the structural mirror of v1 (or the reverse).
    [[nodiscard]] bool is_structural_mirror() const noexcept;

private:
    ValuationSpec v1_;
    ValuationSpec v2_;
    bool monotone_valuations_ = true;
};

/// q_eff with v1(q_eff) = v2(q_eff); throws NoInteriorCrossing when one
/// advertiser dominates on the whole domain.
double efficient_threshold(const AdvertiserPair& pair);

/// E_1(q) = 1 + (eta1 + eta2) * int_q^end v1 / v1(q),
/// E_2(q) = 1 + (eta1 + eta2) * int_0^q v2 / v2(q).
/// Throws DivergentElasticity if the integral is infinite.
double elasticity(const AdvertiserPair& pair, int advertiser, double q);

}  // namespace bidwars
