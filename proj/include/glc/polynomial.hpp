#pragma once

#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "glc/interval.hpp"
#include "glc/rational.hpp"

namespace glc {

class RatPoly;

/// Polynomial with arbitrary-precision integer coefficients, stored
/// lowest-degree-first. The zero polynomial has an empty coefficient list.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { normalize(); }
    IntPoly(std::initializer_list<long> coeffs) {
        for (long x : coeffs) c_.emplace_back(x);
        normalize();
    }

    static IntPoly x_power(int k) {
        std::vector<Int> c(k + 1, Int(0));
        c[k] = 1;
        return IntPoly(std::move(c));
    }

    const std::vector<Int>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const Int& leading() const {
        if (is_zero()) throw std::domain_error("IntPoly: leading of zero polynomial");
        return c_.back();
    }
    Int coeff(int i) const { return i >= 0 && i < (int)c_.size() ? c_[i] : Int(0); }
    bool is_monic() const { return !is_zero() && c_.back() == 1; }

    Rat eval(const Rat& x) const {
        Rat r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + Rat(*it);
        return r;
    }
    Interval eval(const Interval& x) const {
        Interval r{Rat(0)};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + Interval(Rat(*it));
        return r;
    }
    int sign_at(const Rat& x) const { return eval(x).sign(); }

    IntPoly derivative() const {
        if (c_.size() <= 1) return IntPoly();
        std::vector<Int> d(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
        return IntPoly(std::move(d));
    }

    /// f(-x); root mirror used by the +/- embedding-separation check.
    IntPoly reflect() const {
        std::vector<Int> d = c_;
        for (size_t i = 1; i < d.size(); i += 2) d[i] = -d[i];
        return IntPoly(std::move(d));
    }

    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

    /// Cauchy bound: all real roots lie in (-B, B).
    Rat root_bound() const {
        if (is_zero() || degree() == 0) return Rat(1);
        Int m(0);
        for (size_t i = 0; i + 1 < c_.size(); ++i) m = std::max(m, Int(::abs(c_[i])));
        return Rat(1) + Rat(m, ::abs(c_.back()));
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Int> c_;
};

/// Polynomial over the exact rationals, lowest-degree-first.
class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { normalize(); }
    explicit RatPoly(const IntPoly& p) {
        for (const Int& ci : p.coeffs()) c_.emplace_back(ci);
        normalize();
    }
    explicit RatPoly(const Rat& constant) : c_{constant} { normalize(); }

    const std::vector<Rat>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const Rat& leading() const {
        if (is_zero()) throw std::domain_error("RatPoly: leading of zero polynomial");
        return c_.back();
    }
    Rat coeff(int i) const { return i >= 0 && i < (int)c_.size() ? c_[i] : Rat(0); }

    Rat eval(const Rat& x) const {
        Rat r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }
    Interval eval(const Interval& x) const {
        Interval r{Rat(0)};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + Interval(*it);
        return r;
    }
    int sign_at(const Rat& x) const { return eval(x).sign(); }

    RatPoly operator-() const {
        std::vector<Rat> d = c_;
        for (auto& x : d) x = -x;
        return RatPoly(std::move(d));
    }
    friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
        std::vector<Rat> d(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i) d[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) d[i] += b.c_[i];
        return RatPoly(std::move(d));
    }
    friend RatPoly operator-(const RatPoly& a, const RatPoly& b) { return a + (-b); }
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
        if (a.is_zero() || b.is_zero()) return RatPoly();
        std::vector<Rat> d(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) d[i + j] += a.c_[i] * b.c_[j];
        return RatPoly(std::move(d));
    }
    friend RatPoly operator*(const Rat& s, const RatPoly& p) {
        std::vector<Rat> d = p.c_;
        for (auto& x : d) x *= s;
        return RatPoly(std::move(d));
    }
    friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c_ == b.c_; }

    /// Euclidean division: returns (quotient, remainder) with deg r < deg b.
    static std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
        if (b.is_zero()) throw std::domain_error("RatPoly: division by zero polynomial");
        std::vector<Rat> r = a.c_;
        std::vector<Rat> q(a.c_.size() > b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 1, Rat(0));
        int db = b.degree();
        while ((int)r.size() - 1 >= db && !r.empty()) {
            int dr = (int)r.size() - 1;
            if (r.back().is_zero()) {
                r.pop_back();
                continue;
            }
            Rat f = r.back() / b.leading();
            q[dr - db] = f;
            for (int i = 0; i <= db; ++i) r[dr - db + i] -= f * b.c_[i];
            r.pop_back();
        }
        return {RatPoly(std::move(q)), RatPoly(std::move(r))};
    }

    RatPoly monic() const {
        if (is_zero()) return *this;
        return (Rat(1) / leading()) * *this;
    }

    static RatPoly gcd(RatPoly a, RatPoly b) {
        while (!b.is_zero()) {
            RatPoly r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    /// Extended Euclid: returns (g, s, t) with s*a + t*b = g = gcd(a,b), g monic.
    static std::tuple<RatPoly, RatPoly, RatPoly> ext_gcd(RatPoly a, RatPoly b) {
        RatPoly s0(Rat(1)), s1, t0, t1(Rat(1));
        while (!b.is_zero()) {
            auto [q, r] = divmod(a, b);
            a = std::move(b);
            b = std::move(r);
            RatPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
            s0 = std::move(s1);
            s1 = std::move(s2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        if (a.is_zero()) return {a, s0, t0};
        Rat f = Rat(1) / a.leading();
        return {f * a, f * s0, f * t0};
    }

    /// Resultant via the Euclidean recurrence
    /// res(f,g) = (-1)^{deg f * deg g} lc(g)^{deg f - deg r} res(g, r).
    static Rat resultant(RatPoly f, RatPoly g) {
        if (f.is_zero() || g.is_zero()) return Rat(0);
        Rat acc(1);
        while (true) {
            if (g.degree() == 0) return acc * Rat::pow(g.leading(), f.degree());
            RatPoly r = divmod(f, g).second;
            if (r.is_zero()) return Rat(0);
            long df = f.degree(), dg = g.degree(), dr = r.degree();
            if ((df * dg) % 2 == 1) acc = -acc;
            acc *= Rat::pow(g.leading(), df - dr);
            f = std::move(g);
            g = std::move(r);
        }
    }

    IntPoly clear_denominators() const {
        Int l(1);
        for (const Rat& x : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.den().get_mpz_t());
        std::vector<Int> d;
        d.reserve(c_.size());
        for (const Rat& x : c_) d.push_back(x.num() * (l / x.den()));
        return IntPoly(std::move(d));
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rat> c_;
};

inline bool is_squarefree(const IntPoly& f) {
    if (f.is_zero()) return false;
    if (f.degree() <= 1) return true;
    return RatPoly::gcd(RatPoly(f), RatPoly(f.derivative())).degree() == 0;
}

inline IntPoly squarefree_part(const IntPoly& f) {
    if (f.degree() <= 1) return f;
    RatPoly g = RatPoly::gcd(RatPoly(f), RatPoly(f.derivative()));
    if (g.degree() == 0) return f;
    return RatPoly::divmod(RatPoly(f), g).first.clear_denominators();
}

/// Sturm chain of a squarefree integer polynomial.
class SturmChain {
public:
    explicit SturmChain(const IntPoly& f) {
        RatPoly p0(f), p1(f.derivative());
        chain_.push_back(p0);
        if (!p1.is_zero()) chain_.push_back(p1);
        while (chain_.size() >= 2 && !chain_.back().is_zero()) {
            RatPoly r = RatPoly::divmod(chain_[chain_.size() - 2], chain_.back()).second;
            if (r.is_zero()) break;
            chain_.push_back(-r);
        }
    }

    int sign_variations(const Rat& x) const {
        int v = 0, prev = 0;
        for (const RatPoly& p : chain_) {
            int s = p.sign_at(x);
            if (s != 0) {
                if (prev != 0 && s != prev) ++v;
                prev = s;
            }
        }
        return v;
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    int count_roots(const Rat& a, const Rat& b) const {
        return sign_variations(a) - sign_variations(b);
    }

private:
    std::vector<RatPoly> chain_;
};

// ---- GF(p) helpers (small primes; irreducibility certificates) ----

namespace modp {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((__uint128_t)a * b % p);
}

using Poly = std::vector<std::uint64_t>;  // lowest-degree-first, coeffs mod p

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly reduce(const IntPoly& f, std::uint64_t p) {
    Poly r(f.coeffs().size());
    for (size_t i = 0; i < r.size(); ++i) {
        Int c = f.coeffs()[i] % static_cast<long>(p);
        if (c < 0) c += static_cast<long>(p);
        r[i] = c.get_ui();
    }
    trim(r);
    return r;
}

inline std::uint64_t invmod(std::uint64_t b, std::uint64_t p) {
    std::uint64_t e = p - 2, r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, b, p);
        b = mulmod(b, b, p);
        e >>= 1;
    }
    return r;
}

inline Poly mod(Poly a, const Poly& m, std::uint64_t p) {
    trim(a);
    std::uint64_t inv_lead = invmod(m.back(), p);
    while (a.size() >= m.size()) {
        std::uint64_t f = mulmod(a.back(), inv_lead, p);
        size_t off = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i) {
            std::uint64_t sub = mulmod(f, m[i], p);
            a[off + i] = (a[off + i] + p - sub) % p;
        }
        trim(a);
    }
    return a;
}

inline Poly mulmodp(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    return mod(std::move(r), m, p);
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// x^(p^k) mod m, by repeated frobenius power.
inline Poly frobenius_power(const Poly& m, std::uint64_t p, int k) {
    Poly x = {0, 1};
    Poly acc = mod(x, m, p);
    for (int i = 0; i < k; ++i) {
        // acc = acc^p mod m by square-and-multiply on the exponent p
        Poly r = {1};
        Poly base = acc;
        std::uint64_t e = p;
        while (e) {
            if (e & 1) r = mulmodp(r, base, m, p);
            base = mulmodp(base, base, m, p);
            e >>= 1;
        }
        acc = std::move(r);
    }
    return acc;
}

/// True iff f is certified irreducible modulo p (then irreducible over Q).
inline bool irreducible_mod_p(const IntPoly& f, std::uint64_t p) {
    Poly m = reduce(f, p);
    if ((int)m.size() - 1 != f.degree()) return false;  // leading coeff vanished
    int d = f.degree();
    // squarefree mod p and no factor of degree <= d/2
    Poly x = {0, 1};
    for (int i = 1; i <= d / 2; ++i) {
        Poly xpi = frobenius_power(m, p, i);
        // gcd(x^{p^i} - x, m) must be constant
        Poly diff = xpi;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(diff);
        Poly g = gcd(m, diff, p);
        if (g.size() > 1) return false;
    }
    // x^{p^d} == x mod m
    Poly xpd = frobenius_power(m, p, d);
    Poly diff = xpd;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    return diff.empty();
}

}  // namespace modp

}  // namespace glc
