#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "glc/lattice.hpp"

namespace glc {

/// Positive diagonal matrix with determinant exactly 1. Rational entries are
/// certified directly; algebraic entries carry an external determinant
/// certificate (e.g. a unit norm computed field-side) cross-checked against
/// an interval enclosure of the product.
class DiagonalElement {
public:
    DiagonalElement() = default;

    explicit DiagonalElement(std::vector<Scalar> entries) : entries_(std::move(entries)) {
        Rat prod(1);
        for (const Scalar& e : entries_) {
            auto r = e.rational_value();
            if (!r)
                throw std::invalid_argument(
                    "DiagonalElement: algebraic entries need a determinant certificate");
            if (r->sign() <= 0) throw std::invalid_argument("DiagonalElement: entries must be positive");
            prod *= *r;
        }
        if (prod != Rat(1)) throw std::invalid_argument("DiagonalElement: determinant must be 1");
    }

    /// Entries whose exact product is certified elsewhere to be 1; the claim
    /// is cross-checked against an interval enclosure before acceptance.
    static DiagonalElement with_certified_det(std::vector<Scalar> entries,
                                              const Rat& width = Rat(1, 1 << 20)) {
        DiagonalElement a;
        a.entries_ = std::move(entries);
        Interval prod{Rat(1)};
        for (const Scalar& e : a.entries_) {
            Interval iv = e.approx(width);
            if (iv.lo().sign() <= 0 && e.sign() != Sign::Positive)
                throw std::invalid_argument("DiagonalElement: entries must be positive");
            prod *= iv;
        }
        if (!prod.contains(Rat(1)))
            throw std::invalid_argument("DiagonalElement: determinant certificate inconsistent");
        return a;
    }

    static DiagonalElement identity(int d) {
        return DiagonalElement(std::vector<Scalar>(d, Scalar(Rat(1))));
    }

    /// diag(r^{t_1}, ..., r^{t_n}) for integer exponents summing to zero.
    static DiagonalElement geometric(const Rat& base, const std::vector<Int>& exponents) {
        if (base.sign() <= 0) throw std::invalid_argument("DiagonalElement: base must be positive");
        Int sum(0);
        for (const Int& t : exponents) sum += t;
        if (sum != 0)
            throw std::invalid_argument("DiagonalElement: exponents must sum to zero");
        std::vector<Scalar> e;
        for (const Int& t : exponents) e.emplace_back(Rat::pow(base, t.get_si()));
        return DiagonalElement(std::move(e));
    }

    int dim() const { return (int)entries_.size(); }
    const std::vector<Scalar>& entries() const { return entries_; }
    const Scalar& entry(int i) const { return entries_[i]; }

    bool is_rational() const {
        for (const Scalar& e : entries_)
            if (!e.is_rational()) return false;
        return true;
    }

    DiagonalElement inverse() const {
        std::vector<Scalar> inv;
        for (const Scalar& e : entries_) {
            auto r = e.try_inverse();
            if (!r) throw std::domain_error("DiagonalElement: entry not exactly invertible");
            inv.push_back(*r);
        }
        DiagonalElement a;
        a.entries_ = std::move(inv);
        return a;
    }

    friend DiagonalElement operator*(const DiagonalElement& a, const DiagonalElement& b) {
        if (a.dim() != b.dim()) throw std::invalid_argument("DiagonalElement: dimension mismatch");
        std::vector<Scalar> e;
        for (int i = 0; i < a.dim(); ++i) {
            auto p = Scalar::try_mul(a.entries_[i], b.entries_[i]);
            if (!p) throw std::domain_error("DiagonalElement: product not exact");
            e.push_back(*p);
        }
        DiagonalElement r;
        r.entries_ = std::move(e);
        return r;
    }

private:
    std::vector<Scalar> entries_;
};

/// Element of the expanding cone: a (d+1)-dimensional diagonal element whose
/// first d entries exceed 1 (log-coordinates strictly positive).
class ConeElement {
public:
    explicit ConeElement(DiagonalElement a) : a_(std::move(a)) {
        int d = a_.dim() - 1;
        if (d < 1) throw std::invalid_argument("ConeElement: need dimension >= 2");
        for (int i = 0; i < d; ++i) {
            Sign s = (a_.entry(i) - Scalar(Rat(1))).sign();
            if (s != Sign::Positive)
                throw std::invalid_argument("ConeElement: first d entries must exceed 1");
        }
    }
    const DiagonalElement& diag() const { return a_; }

private:
    DiagonalElement a_;
};

/// Coordinatewise action on a lattice: row i of the basis scaled by entry i.
/// Covolume is untouched (determinant one).
inline Lattice apply_diag(const DiagonalElement& a, const Lattice& x) {
    if (a.dim() != x.dim()) throw std::invalid_argument("apply_diag: dimension mismatch");
    ScalarMat b(x.dim(), x.dim());
    for (int i = 0; i < x.dim(); ++i)
        for (int j = 0; j < x.dim(); ++j) {
            auto p = Scalar::try_mul(a.entry(i), x.basis()(i, j));
            if (!p) throw std::domain_error("apply_diag: product not exact");
            b(i, j) = *p;
        }
    return Lattice(std::move(b), x.covol_sq(), x.normalized());
}

/// Grids transform with their lattice; the translation coordinates (taken
/// with respect to the basis) are unchanged.
inline Grid apply_diag(const DiagonalElement& a, const Grid& y) {
    return Grid(apply_diag(a, y.lattice()), y.coords());
}

struct TrajectorySample {
    Int time;                 // exponent multiple k on the geometric clock
    Interval systole;         // certified sup-norm systole of a_k tau_y
    std::vector<Int> coeffs;  // basis coefficients of a vector attaining it
    bool precision_ok = true;
};

struct Trajectory {
    Grid grid;                    // the flowed grid y
    std::vector<Int> direction;   // integer cone direction (t_1..t_d, -sum)
    Rat base = Rat(2);            // geometric clock base r; a_k = diag(r^{k t_i})
    std::vector<TrajectorySample> samples;
};

/// Sample the systole of a_t tau_y along a cone ray at the geometric clock
/// t = 1..steps. The direction is a positive rational d-vector; its entries
/// are scaled to integers and the last coordinate is set to minus their sum,
/// so every transformed basis stays exactly rational.
inline Trajectory cone_ray_flow(const Grid& y, const std::vector<Rat>& direction, long steps,
                                const Rat& base = Rat(2)) {
    int d = y.lattice().dim();
    if ((int)direction.size() != d)
        throw std::invalid_argument("cone_ray_flow: direction must have d entries");
    if (steps < 1) throw std::invalid_argument("cone_ray_flow: steps must be >= 1");
    for (const Rat& t : direction)
        if (t.sign() <= 0)
            throw std::invalid_argument("cone_ray_flow: direction entries must be positive");

    Trajectory traj;
    traj.grid = y;
    traj.base = base;
    Int l(1);
    for (const Rat& t : direction) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.den().get_mpz_t());
    Int sum(0);
    for (const Rat& t : direction) {
        Rat scaled = t * Rat(l);
        traj.direction.push_back(scaled.num());
        sum += scaled.num();
    }
    traj.direction.push_back(-sum);

    Lattice tau = tau_embed(y);
    for (long k = 1; k <= steps; ++k) {
        std::vector<Int> exps;
        for (const Int& t : traj.direction) exps.push_back(t * k);
        DiagonalElement a = DiagonalElement::geometric(base, exps);
        ConeElement cone(a);  // membership check: expanding on the first d coordinates
        Lattice moved = apply_diag(cone.diag(), tau);
        TrajectorySample s;
        s.time = Int(k);
        try {
            ShortestVectorResult sv = shortest_vector(moved);
            s.systole = sv.norm;
            s.coeffs = sv.coeffs;
        } catch (const std::runtime_error&) {
            s.precision_ok = false;
        }
        traj.samples.push_back(std::move(s));
    }
    return traj;
}

/// Witnesses extracted from a trajectory per the contraction mechanism: each
/// sample with systole certified below eps yields a vector w in tau_y with
/// |N(w)| < eps^{d+1} and nonzero last coordinate. Precondition: eps is
/// strictly below the systole of the projected lattice, which forces the
/// last coordinate of any such w to be nonzero.
inline std::vector<WitnessRecord> unboundedness_report(const Trajectory& traj, const Rat& eps) {
    if (eps.sign() <= 0) throw std::invalid_argument("unboundedness_report: eps must be positive");
    const Grid& y = traj.grid;
    int d = y.lattice().dim();
    ShortestVectorResult proj = shortest_vector(y.lattice());
    if (!(Rat(eps) < proj.norm.lo()))
        throw std::domain_error(
            "unboundedness_report: eps must be below the systole of the projected lattice");

    Lattice tau = tau_embed(y);
    RatMat B = tau.rational_basis();
    Rat eps_pow = Rat::pow(eps, d + 1);

    std::vector<WitnessRecord> out;
    for (const TrajectorySample& s : traj.samples) {
        if (!s.precision_ok) continue;
        if (!(s.systole.hi() < eps)) continue;
        // pull back: the short vector of a_t tau_y and its preimage in tau_y
        // share coefficients, and |N| is invariant under the diagonal action
        std::vector<Rat> mc(d + 1);
        for (int j = 0; j <= d; ++j) mc[j] = Rat(s.coeffs[j]);
        std::vector<Rat> w = B * mc;
        if (w[d].is_zero())
            throw std::logic_error(
                "unboundedness_report: internal consistency error, pulled-back vector has zero "
                "last coordinate although eps is below the projected systole");
        Rat prod(1);
        for (const Rat& wi : w) prod *= wi;
        if (!(prod.abs() < eps_pow))
            throw std::logic_error("unboundedness_report: witness bound fails re-verification");
        WitnessRecord rec;
        // normalize the sign so the last coordinate (= its coefficient, the
        // bottom basis row being (0..0 1)) is positive; |N| is unaffected
        bool flip = s.coeffs[d] < 0;
        for (int j = 0; j <= d; ++j) {
            Int c = s.coeffs[j];
            if (flip) c = -c;
            if (j < d)
                rec.coeffs.push_back(c);
            else
                rec.n = c;
        }
        rec.bound.exact = prod.abs();
        rec.bound.box = Interval(prod.abs());
        rec.region_radius = eps;
        out.push_back(std::move(rec));
    }
    return out;
}

enum class StabilizerAnswer { Yes, No, Unknown };

struct StabilizerResult {
    StabilizerAnswer answer = StabilizerAnswer::Unknown;
    IntMat certificate;  // integer M with a * basis = basis * M, det +-1
};

/// Does the diagonal element stabilize the lattice? The candidate integer
/// matrix M is unique (M = B^{-1} a B), located by interval refinement and
/// then verified exactly, so Yes/No answers are certificates either way.
inline StabilizerResult stabilizer_check(const DiagonalElement& a, const Lattice& x) {
    if (a.dim() != x.dim()) throw std::invalid_argument("stabilizer_check: dimension mismatch");
    int d = x.dim();

    // exact rational shortcut
    if (a.is_rational() && x.has_rational_basis()) {
        RatMat B = x.rational_basis();
        RatMat aB(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) aB(i, j) = *a.entry(i).rational_value() * B(i, j);
        RatMat M = inverse(B) * aB;
        StabilizerResult res;
        if (!is_integer_matrix(M)) {
            res.answer = StabilizerAnswer::No;
            return res;
        }
        IntMat Mi = to_integer_matrix(M);
        Int dM = det(Mi);
        res.answer = (dM == 1 || dM == -1) ? StabilizerAnswer::Yes : StabilizerAnswer::No;
        if (res.answer == StabilizerAnswer::Yes) res.certificate = Mi;
        return res;
    }

    // algebraic case: locate M by intervals, then verify exactly
    Lattice moved = apply_diag(a, x);  // throws if the products are not exact
    Rat w(1, 1 << 16);
    while (w >= precision_floor()) {
        Matrix<Interval> Bi = x.interval_basis(w);
        Matrix<Interval> Ai = moved.interval_basis(w);
        // Gauss-Jordan solve B M = A in interval arithmetic
        bool ok = true;
        int n = d;
        for (int c = 0; c < n && ok; ++c) {
            int piv = -1;
            Rat bestmag(0);
            for (int r = c; r < n; ++r) {
                if (Bi(r, c).contains_zero()) continue;
                Rat mag = std::min(Bi(r, c).lo().abs(), Bi(r, c).hi().abs());
                if (piv < 0 || mag > bestmag) {
                    piv = r;
                    bestmag = mag;
                }
            }
            if (piv < 0) {
                ok = false;
                break;
            }
            if (piv != c)
                for (int j = 0; j < n; ++j) {
                    std::swap(Bi(piv, j), Bi(c, j));
                    std::swap(Ai(piv, j), Ai(c, j));
                }
            Interval p = Bi(c, c);
            for (int j = 0; j < n; ++j) {
                Bi(c, j) = Bi(c, j) / p;
                Ai(c, j) = Ai(c, j) / p;
            }
            for (int r = 0; r < n; ++r) {
                if (r == c) continue;
                Interval f = Bi(r, c);
                if (f.lo().is_zero() && f.hi().is_zero()) continue;
                for (int j = 0; j < n; ++j) {
                    Bi(r, j) -= f * Bi(c, j);
                    Ai(r, j) -= f * Ai(c, j);
                }
            }
        }
        if (ok) {
            bool narrow = true;
            IntMat M(d, d);
            for (int i = 0; i < d && narrow; ++i)
                for (int j = 0; j < d && narrow; ++j) {
                    if (Ai(i, j).width() >= Rat(1, 2)) {
                        narrow = false;
                        break;
                    }
                    M(i, j) = Ai(i, j).mid().round_nearest();
                }
            if (narrow) {
                // exact verification of a B = B M
                bool equal = true;
                for (int i = 0; i < d && equal; ++i)
                    for (int j = 0; j < d && equal; ++j) {
                        Scalar rhs;
                        for (int k = 0; k < d; ++k) rhs += Rat(M(k, j)) * x.basis()(i, k);
                        Scalar diff = moved.basis()(i, j) - rhs;
                        try {
                            if (!diff.is_zero()) equal = false;
                        } catch (const std::runtime_error&) {
                            equal = false;  // undecidable counts as unverified
                        }
                    }
                StabilizerResult res;
                if (!equal) {
                    // M is the unique candidate; exact mismatch means No
                    res.answer = StabilizerAnswer::No;
                    return res;
                }
                Int dM = det(M);
                res.answer = (dM == 1 || dM == -1) ? StabilizerAnswer::Yes : StabilizerAnswer::No;
                if (res.answer == StabilizerAnswer::Yes) res.certificate = M;
                return res;
            }
        }
        w = w / 16;
    }
    return StabilizerResult{};  // Unknown: caller refines or reports precision exhaustion
}

}  // namespace glc
