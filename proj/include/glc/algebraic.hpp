#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "glc/interval.hpp"
#include "glc/polynomial.hpp"
#include "glc/rational.hpp"

namespace glc {

/// Hard floor for refinement loops: below this width a sign query that has
/// not resolved is reported Unknown and callers must handle it explicitly.
inline const Rat& precision_floor() {
    static const Rat floor = Rat(1, Int(1) << 256);
    return floor;
}

/// A real algebraic number: a squarefree integer polynomial together with an
/// isolating interval containing exactly one of its real roots. The cached
/// interval only ever shrinks; the represented number never moves.
class AlgebraicReal {
public:
    AlgebraicReal(IntPoly poly, Interval isolating)
        : poly_(std::move(poly)), iso_(std::move(isolating)) {
        if (iso_.is_point()) return;  // exact rational root
        if (poly_.sign_at(iso_.lo()) == 0 || poly_.sign_at(iso_.hi()) == 0)
            throw std::invalid_argument("AlgebraicReal: endpoint is a root");
    }

    /// Exact rational value (point interval).
    static AlgebraicReal from_rational(const Rat& r) {
        std::vector<Int> c{-r.num(), r.den()};
        return AlgebraicReal(IntPoly(std::move(c)), Interval(r), exact_tag{});
    }

    const IntPoly& minimal_polynomial() const { return poly_; }
    const Interval& interval() const { return iso_; }
    bool is_rational() const { return iso_.is_point(); }
    std::optional<Rat> rational_value() const {
        if (is_rational()) return iso_.lo();
        return std::nullopt;
    }

    /// Shrink the isolating interval to width <= target by bisection.
    /// Nested: the result is always contained in every earlier interval.
    const Interval& refine_to(const Rat& width) const {
        if (width.sign() <= 0) throw std::invalid_argument("refine_to: width must be positive");
        while (iso_.width() > width) {
            Rat mid = iso_.mid();
            int sm = poly_.sign_at(mid);
            if (sm == 0) {  // landed exactly on the (rational) root
                iso_ = Interval(mid);
                return iso_;
            }
            int slo = poly_.sign_at(iso_.lo());
            if (slo == sm)
                iso_ = Interval(mid, iso_.hi());
            else
                iso_ = Interval(iso_.lo(), mid);
        }
        return iso_;
    }

    /// Certified sign of the number itself; exact (zero is decided).
    Sign sign() const {
        if (is_rational()) {
            int s = iso_.lo().sign();
            return s > 0 ? Sign::Positive : s < 0 ? Sign::Negative : Sign::Unknown;
        }
        int s = sign_of(RatPoly(std::vector<Rat>{Rat(0), Rat(1)}));
        return s > 0 ? Sign::Positive : s < 0 ? Sign::Negative : Sign::Unknown;
    }

    /// Exact sign of g at this number. Decides zero exactly: g(alpha) = 0
    /// iff gcd(g, f) still has the root in the isolating interval.
    int sign_of(const RatPoly& g) const {
        if (g.is_zero()) return 0;
        if (is_rational()) return g.sign_at(iso_.lo());
        if (contains_root_of(g)) return 0;
        // nonzero: refine until the interval evaluation excludes zero
        Rat w = iso_.width();
        while (true) {
            Interval v = g.eval(iso_);
            if (v.sign() == Sign::Positive) return 1;
            if (v.sign() == Sign::Negative) return -1;
            w = w / 2;
            if (w < precision_floor())
                throw std::runtime_error("AlgebraicReal::sign_of: precision floor reached");
            refine_to(w);
        }
    }

    /// Isolate all real roots of a squarefree polynomial, increasing order.
    static std::vector<AlgebraicReal> isolate_real_roots(const IntPoly& f) {
        if (f.is_zero()) throw std::invalid_argument("isolate_real_roots: zero polynomial");
        if (!is_squarefree(f))
            throw std::invalid_argument(
                "isolate_real_roots: polynomial is not squarefree (deflate via gcd with the "
                "derivative first)");
        if (f.degree() == 0) return {};
        SturmChain chain(f);
        Rat bound = f.root_bound();
        Rat lo = -bound, hi = bound;
        // nudge endpoints off roots (Cauchy bound is strict, but stay safe)
        while (f.sign_at(lo) == 0) lo -= 1;
        while (f.sign_at(hi) == 0) hi += 1;
        std::vector<AlgebraicReal> roots;
        isolate_rec(f, chain, lo, hi, chain.count_roots(lo, hi), roots);
        return roots;
    }

private:
    struct exact_tag {};
    AlgebraicReal(IntPoly poly, Interval iso, exact_tag) : poly_(std::move(poly)), iso_(std::move(iso)) {}

    /// Does this number satisfy g = 0? Exact: check whether gcd(g, f) has a
    /// sign change (hence a root -- necessarily ours) inside the interval.
    bool contains_root_of(const RatPoly& g) const {
        RatPoly h = RatPoly::gcd(g, RatPoly(poly_));
        if (h.degree() <= 0) return false;
        IntPoly hz = h.clear_denominators();
        // our interval contains exactly one root of f; h divides f, so h has
        // a root here iff that root is also a root of h
        SturmChain hc(hz);
        return hc.count_roots(iso_.lo(), iso_.hi()) > 0;
    }

    static void isolate_rec(const IntPoly& f, const SturmChain& chain, const Rat& lo,
                            const Rat& hi, int count, std::vector<AlgebraicReal>& out) {
        if (count <= 0) return;
        if (count == 1) {
            out.emplace_back(f, Interval(lo, hi));
            return;
        }
        Rat mid = (lo + hi) / 2;
        // bisection point must not be a root; dodge deterministically
        Rat step = (hi - lo) / 64;
        while (f.sign_at(mid) == 0) mid += step / 997;
        int left = chain.count_roots(lo, mid);
        isolate_rec(f, chain, lo, mid, left, out);
        isolate_rec(f, chain, mid, hi, count - left, out);
    }

    IntPoly poly_;
    mutable Interval iso_;
};

/// Refine until a sign is certified or the width drops below the hard
/// floor; Unknown must be handled by the caller.
inline Sign certified_sign_with_refinement(const AlgebraicReal& a,
                                           const Rat& floor = precision_floor()) {
    if (a.is_rational()) {
        int s = a.rational_value()->sign();
        return s > 0 ? Sign::Positive : s < 0 ? Sign::Negative : Sign::Unknown;
    }
    Rat w = a.interval().width();
    while (true) {
        Sign s = a.interval().sign();
        if (s != Sign::Unknown) return s;
        if (w < floor) return Sign::Unknown;
        w = w / 2;
        a.refine_to(w);
    }
}

}  // namespace glc
