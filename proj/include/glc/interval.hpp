#pragma once

#include <mpfr.h>

#include <algorithm>
#include <stdexcept>

#include "glc/rational.hpp"

namespace glc {

/// Outcome of a certified sign query. Unknown means "zero or undecided at
/// the current precision"; callers refine and retry, or give up explicitly.
enum class Sign { Negative, Unknown, Positive };

/// Closed interval with exact rational endpoints. All operations are
/// outward-conservative: the exact result of the operation applied to any
/// members of the inputs is contained in the output.
class Interval {
public:
    Interval() : lo_(0), hi_(0) {}
    Interval(const Rat& point) : lo_(point), hi_(point) {}
    Interval(Rat lo, Rat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_ > hi_) throw std::invalid_argument("Interval: lo > hi");
    }

    const Rat& lo() const { return lo_; }
    const Rat& hi() const { return hi_; }
    Rat width() const { return hi_ - lo_; }
    Rat mid() const { return (lo_ + hi_) / 2; }
    bool is_point() const { return lo_ == hi_; }
    bool contains(const Rat& r) const { return lo_ <= r && r <= hi_; }
    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
    bool intersects(const Interval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

    Sign sign() const {
        if (lo_.sign() > 0) return Sign::Positive;
        if (hi_.sign() < 0) return Sign::Negative;
        return Sign::Unknown;
    }

    Interval operator-() const { return Interval(-hi_, -lo_); }

    friend Interval operator+(const Interval& a, const Interval& b) {
        return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_);
    }
    friend Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }
    friend Interval operator*(const Interval& a, const Interval& b) {
        Rat p1 = a.lo_ * b.lo_, p2 = a.lo_ * b.hi_, p3 = a.hi_ * b.lo_, p4 = a.hi_ * b.hi_;
        return Interval(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
    }
    friend Interval operator/(const Interval& a, const Interval& b) {
        if (b.contains_zero())
            throw std::domain_error("Interval: division by interval containing zero");
        return a * Interval(Rat(1) / b.hi_, Rat(1) / b.lo_);
    }

    Interval& operator+=(const Interval& o) { return *this = *this + o; }
    Interval& operator-=(const Interval& o) { return *this = *this - o; }
    Interval& operator*=(const Interval& o) { return *this = *this * o; }

    Interval abs() const {
        if (lo_.sign() >= 0) return *this;
        if (hi_.sign() <= 0) return -*this;
        return Interval(Rat(0), std::max(-lo_, hi_));
    }

    Interval pow_int(long k) const {
        if (k == 0) return Interval(Rat(1));
        if (k < 0) return Interval(Rat(1)) / pow_int(-k);
        Interval r(Rat(1));
        for (long i = 0; i < k; ++i) r *= *this;
        return r;
    }

    static Interval hull(const Interval& a, const Interval& b) {
        return Interval(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
    }

    Interval intersect(const Interval& o) const {
        Rat l = std::max(lo_, o.lo_), h = std::min(hi_, o.hi_);
        if (l > h) throw std::domain_error("Interval: empty intersection");
        return Interval(l, h);
    }

    /// Round endpoints outward onto the dyadic grid 2^-bits. Controls
    /// denominator blow-up without violating conservativeness.
    Interval round_outward(unsigned bits) const {
        Int scale = Int(1) << bits;
        Rat l(( lo_ * Rat(scale)).floor(), scale);
        Rat h((hi_ * Rat(scale)).ceil(), scale);
        return Interval(l, h);
    }

    /// Conservative natural logarithm; requires lo > 0. Endpoints are
    /// certified rational bounds obtained by directed rounding.
    static Interval log(const Interval& x, unsigned prec_bits = 96) {
        if (x.lo_.sign() <= 0)
            throw std::domain_error("Interval::log: argument must be strictly positive");
        return Interval(log_bound(x.lo_, MPFR_RNDD, prec_bits),
                        log_bound(x.hi_, MPFR_RNDU, prec_bits));
    }

private:
    static Rat log_bound(const Rat& r, mpfr_rnd_t rnd, unsigned prec) {
        mpfr_t t;
        mpfr_init2(t, prec);
        mpfr_set_q(t, r.raw().get_mpq_t(), rnd);
        mpfr_log(t, t, rnd);
        // exact dyadic readback: t = m * 2^e
        mpz_class m;
        mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), t);
        mpfr_clear(t);
        if (e >= 0) {
            Int num = m * (Int(1) << static_cast<unsigned long>(e));
            return Rat(num);
        }
        Int den = Int(1) << static_cast<unsigned long>(-e);
        return Rat(m, den);
    }

    Rat lo_, hi_;
};

}  // namespace glc
