#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "glc/algebraic.hpp"
#include "glc/interval.hpp"
#include "glc/polynomial.hpp"
#include "glc/rational.hpp"

namespace glc {

/// Exact real scalar: a rational constant plus, per distinct algebraic root
/// alpha, a rational polynomial evaluated at alpha (kept reduced modulo
/// alpha's defining polynomial). Closed under addition, subtraction and
/// rational scaling; products are exact when at most one root is involved
/// and fall back to intervals otherwise.
class Scalar {
public:
    using RootPtr = std::shared_ptr<const AlgebraicReal>;

    Scalar() : constant_(0) {}
    Scalar(const Rat& r) : constant_(r) {}
    Scalar(long n) : constant_(n) {}

    /// g(alpha) for a shared root alpha.
    static Scalar at_root(RootPtr root, RatPoly g) {
        Scalar s;
        if (!root) throw std::invalid_argument("Scalar::at_root: null root");
        if (root->is_rational()) {
            s.constant_ = g.eval(*root->rational_value());
            return s;
        }
        g = reduce(std::move(g), root->minimal_polynomial());
        s.constant_ = g.coeff(0);
        std::vector<Rat> rest(g.coeffs().begin() + std::min<size_t>(1, g.coeffs().size()),
                              g.coeffs().end());
        rest.insert(rest.begin(), Rat(0));
        RatPoly tail(std::move(rest));
        if (!tail.is_zero()) s.terms_.emplace_back(std::move(root), std::move(tail));
        return s;
    }

    static Scalar root_value(RootPtr root) {
        return at_root(std::move(root), RatPoly(std::vector<Rat>{Rat(0), Rat(1)}));
    }

    bool is_rational() const { return terms_.empty(); }
    std::optional<Rat> rational_value() const {
        if (is_rational()) return constant_;
        return std::nullopt;
    }

    /// Exact zero test. Decidable when at most one root term is present;
    /// multi-root combinations are rejected as nonzero only when intervals
    /// certify it, else this throws (caller treats as precision exhaustion).
    bool is_zero() const {
        if (is_rational()) return constant_.is_zero();
        if (terms_.size() == 1) {
            RatPoly full = terms_[0].second + RatPoly(constant_);
            return terms_[0].first->sign_of(full) == 0;
        }
        Sign s = sign(precision_floor());
        if (s == Sign::Unknown)
            throw std::runtime_error("Scalar::is_zero: undecidable multi-root combination");
        return false;
    }

    /// Certified sign with refinement down to the given floor.
    Sign sign(const Rat& floor = precision_floor()) const {
        if (is_rational()) {
            int s = constant_.sign();
            return s > 0 ? Sign::Positive : s < 0 ? Sign::Negative : Sign::Unknown;
        }
        if (terms_.size() == 1) {
            RatPoly full = terms_[0].second + RatPoly(constant_);
            int s = terms_[0].first->sign_of(full);
            return s > 0 ? Sign::Positive : s < 0 ? Sign::Negative : Sign::Unknown;
        }
        Rat w = coarse_width();
        while (true) {
            Interval v = approx_at(w);
            if (v.sign() != Sign::Unknown) return v.sign();
            if (w < floor) return Sign::Unknown;
            w = w / 2;
        }
    }

    /// Enclosing interval of total width <= target (roots refined on demand).
    Interval approx(const Rat& target_width) const {
        if (is_rational()) return Interval(constant_);
        Rat w = target_width;
        while (true) {
            Interval v = approx_at(w);
            if (v.width() <= target_width) return v;
            if (w < precision_floor())
                throw std::runtime_error("Scalar::approx: precision floor reached");
            w = w / 2;
        }
    }

    Scalar operator-() const {
        Scalar r;
        r.constant_ = -constant_;
        for (const auto& [root, poly] : terms_) r.terms_.emplace_back(root, -poly);
        return r;
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        Scalar r = a;
        r.constant_ += b.constant_;
        for (const auto& [root, poly] : b.terms_) r.add_term(root, poly);
        return r;
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

    friend Scalar operator*(const Rat& s, const Scalar& a) {
        if (s.is_zero()) return Scalar();
        Scalar r;
        r.constant_ = s * a.constant_;
        for (const auto& [root, poly] : a.terms_) r.terms_.emplace_back(root, s * poly);
        return r;
    }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }

    /// Exact product, available when the operands involve at most one common
    /// root between them. Returns nullopt when exactness is not preserved.
    static std::optional<Scalar> try_mul(const Scalar& a, const Scalar& b) {
        if (a.is_rational()) return a.constant_ * b;
        if (b.is_rational()) return b.constant_ * a;
        if (a.terms_.size() != 1 || b.terms_.size() != 1) return std::nullopt;
        if (a.terms_[0].first != b.terms_[0].first) return std::nullopt;
        const RootPtr& root = a.terms_[0].first;
        RatPoly fa = a.terms_[0].second + RatPoly(a.constant_);
        RatPoly fb = b.terms_[0].second + RatPoly(b.constant_);
        return at_root(root, fa * fb);
    }

    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        auto r = try_mul(a, b);
        if (!r)
            throw std::domain_error("Scalar: product of distinct algebraic roots is not exact");
        return *r;
    }

    /// Exact multiplicative inverse, available for rational values and
    /// single-root values (extended Euclid against the defining polynomial).
    std::optional<Scalar> try_inverse() const {
        if (is_rational()) {
            if (constant_.is_zero()) return std::nullopt;
            return Scalar(Rat(1) / constant_);
        }
        if (terms_.size() != 1) return std::nullopt;
        const RootPtr& root = terms_[0].first;
        RatPoly full = terms_[0].second + RatPoly(constant_);
        if (root->sign_of(full) == 0) return std::nullopt;  // value is zero
        // strip factors of the defining polynomial not vanishing at the root
        // until it is coprime to `full` (the defining poly need not be
        // irreducible, only squarefree)
        RatPoly f(root->minimal_polynomial());
        while (true) {
            RatPoly g = RatPoly::gcd(full, f);
            if (g.degree() <= 0) break;
            f = RatPoly::divmod(f, g).first;  // g(root) != 0, root stays a root of f
        }
        auto [g, s, t] = RatPoly::ext_gcd(full, f);
        (void)t;
        if (g.degree() != 0) return std::nullopt;
        Rat inv_lead = Rat(1) / g.coeff(0);
        return at_root(root, inv_lead * s);
    }

    /// Interval product regardless of exactness.
    static Interval mul_interval(const Scalar& a, const Scalar& b, const Rat& width) {
        if (auto r = try_mul(a, b)) return r->approx(width);
        return a.approx(width) * b.approx(width);
    }

    friend bool operator==(const Scalar& a, const Scalar& b) { return (a - b).is_zero(); }

    const Rat& constant_part() const { return constant_; }
    size_t root_count() const { return terms_.size(); }

private:
    static RatPoly reduce(RatPoly g, const IntPoly& f) {
        if (g.degree() >= f.degree()) g = RatPoly::divmod(g, RatPoly(f)).second;
        return g;
    }

    void add_term(const RootPtr& root, const RatPoly& poly) {
        for (auto& [r, p] : terms_) {
            if (r == root) {
                p = p + poly;
                if (p.is_zero()) {
                    terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                                [&](const auto& t) { return t.second.is_zero(); }),
                                 terms_.end());
                }
                return;
            }
        }
        terms_.emplace_back(root, poly);
    }

    Rat coarse_width() const {
        Rat w(1, 16);
        return w;
    }

    Interval approx_at(const Rat& per_root_width) const {
        Interval acc{constant_};
        for (const auto& [root, poly] : terms_) {
            root->refine_to(per_root_width);
            acc += poly.eval(root->interval());
        }
        return acc;
    }

    Rat constant_;
    std::vector<std::pair<RootPtr, RatPoly>> terms_;
};

}  // namespace glc
