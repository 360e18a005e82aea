#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "glc/linalg.hpp"
#include "glc/scalar.hpp"

namespace glc {

using ScalarMat = Matrix<Scalar>;
using ScalarVec = std::vector<Scalar>;

/// Exact floor of a scalar. Integer-boundary cases are decided exactly when
/// the scalar supports an exact zero test.
inline Int floor_exact(const Scalar& s) {
    if (auto r = s.rational_value()) return r->floor();
    Rat w(1, 4);
    while (true) {
        Interval iv = s.approx(w);
        Int flo = iv.lo().floor(), fhi = iv.hi().floor();
        if (flo == fhi && !iv.hi().is_integer()) return flo;
        // candidate boundary: is s exactly the integer fhi?
        if ((s - Scalar(Rat(fhi))).is_zero()) return fhi;
        if (w < precision_floor())
            throw std::runtime_error("floor_exact: precision floor reached");
        w = w / 2;
    }
}

/// |N| of a grid vector: exact rational when every coordinate is rational,
/// otherwise a conservative interval (refinable via `width`).
struct ProductValue {
    std::optional<Rat> exact;  // signed product when rational
    Interval box;              // always a valid enclosure of the signed product
    int scale_exp = 0;         // reported value is (value) * c^scale_exp

    Rat upper_abs() const {
        if (exact) return exact->abs();
        return std::max(box.lo().abs(), box.hi().abs());
    }
    bool is_exact_zero() const { return exact && exact->is_zero(); }
};

/// N(w) = product of the coordinates.
inline ProductValue product_form(const ScalarVec& w, const Rat& width = Rat(1, 1 << 20)) {
    ProductValue pv;
    bool rational = true;
    Rat exact(1);
    for (const Scalar& s : w)
        if (!s.is_rational()) {
            rational = false;
            break;
        }
    if (rational) {
        for (const Scalar& s : w) exact *= *s.rational_value();
        pv.exact = exact;
        pv.box = Interval(exact);
        return pv;
    }
    // exact zero coordinate forces an exact zero product
    for (const Scalar& s : w) {
        bool zero = false;
        try {
            zero = s.is_zero();
        } catch (const std::runtime_error&) {
            zero = false;  // undecidable: fall through to intervals
        }
        if (zero) {
            pv.exact = Rat(0);
            pv.box = Interval(Rat(0));
            return pv;
        }
    }
    Interval acc{Rat(1)};
    for (const Scalar& s : w) acc *= s.approx(width);
    pv.box = acc;
    return pv;
}

/// A full-rank lattice given by exact basis columns. `covol_sq`, when known,
/// is the exact square of the unscaled covolume; a lattice flagged
/// `normalized` carries the symbolic scale c = covol^{-1/d} (kept out of the
/// stored entries so zero-detection stays exact).
class Lattice {
public:
    Lattice() = default;
    Lattice(ScalarMat basis, std::optional<Rat> covol_sq = std::nullopt, bool normalized = false)
        : basis_(std::move(basis)), covol_sq_(std::move(covol_sq)), normalized_(normalized) {
        if (basis_.rows() != basis_.cols())
            throw std::invalid_argument("Lattice: basis must be square");
    }

    static Lattice standard(int d) {
        ScalarMat b(d, d, Scalar(Rat(0)));
        for (int i = 0; i < d; ++i) b(i, i) = Scalar(Rat(1));
        return Lattice(std::move(b), Rat(1), false);
    }

    static Lattice from_rational(const RatMat& m) {
        ScalarMat b(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) b(i, j) = Scalar(m(i, j));
        Rat d = det(m);
        return Lattice(std::move(b), d * d, false);
    }

    int dim() const { return basis_.rows(); }
    const ScalarMat& basis() const { return basis_; }
    bool normalized() const { return normalized_; }
    const std::optional<Rat>& covol_sq() const { return covol_sq_; }

    bool has_rational_basis() const {
        for (int i = 0; i < basis_.rows(); ++i)
            for (int j = 0; j < basis_.cols(); ++j)
                if (!basis_(i, j).is_rational()) return false;
        return true;
    }

    RatMat rational_basis() const {
        RatMat m(basis_.rows(), basis_.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) {
                auto r = basis_(i, j).rational_value();
                if (!r) throw std::domain_error("Lattice: basis is not rational");
                m(i, j) = *r;
            }
        return m;
    }

    /// Interval enclosure of the basis entries at the given width.
    Matrix<Interval> interval_basis(const Rat& width) const {
        Matrix<Interval> m(basis_.rows(), basis_.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) m(i, j) = basis_(i, j).approx(width);
        return m;
    }

    /// Certificate interval for |det(basis)| * c^d (i.e. the covolume after
    /// the symbolic scale is applied; c = 1 for unnormalized lattices).
    Interval covolume_certificate(const Rat& width = Rat(1, 1 << 20)) const {
        Interval d = interval_det(width).abs();
        if (!normalized_) return d;
        if (!covol_sq_) throw std::domain_error("Lattice: normalized without covol_sq");
        // |det| / covol where covol = sqrt(covol_sq): square and compare
        Interval d2 = d * d;
        return d2 / Interval(*covol_sq_);  // contains 1 iff det^2 = covol^2
    }

    bool certified_nonsingular(const Rat& width = Rat(1, 1 << 20)) const {
        if (has_rational_basis()) return !det(rational_basis()).is_zero();
        Rat w = width;
        while (w >= precision_floor()) {
            if (!interval_det(w).contains_zero()) return true;
            w = w / 16;
        }
        return false;
    }

    /// Unimodular: covolume exactly 1, or normalized with a certificate
    /// containing 1 within tolerance.
    bool is_unimodular(const Rat& tol = Rat(1, 1 << 20)) const {
        if (!normalized_) {
            if (covol_sq_) return *covol_sq_ == Rat(1);
            if (has_rational_basis()) return det(rational_basis()).abs() == Rat(1);
            return false;
        }
        Interval cert = covolume_certificate(tol);
        return cert.contains(Rat(1)) && cert.width() <= tol * 16;
    }

    Interval interval_det(const Rat& width) const {
        Matrix<Interval> m = interval_basis(width);
        return laplace_det(m);
    }

private:
    static Interval laplace_det(const Matrix<Interval>& m) {
        int n = m.rows();
        if (n == 1) return m(0, 0);
        Interval acc{Rat(0)};
        for (int i = 0; i < n; ++i) {
            Matrix<Interval> minor(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 1; c < n; ++c) minor(rr, c - 1) = m(r, c);
                ++rr;
            }
            Interval term = m(i, 0) * laplace_det(minor);
            acc = (i % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    }

    ScalarMat basis_;
    std::optional<Rat> covol_sq_;
    bool normalized_ = false;
};

/// A grid y = x + v. The translation is stored as coordinates with respect
/// to the lattice basis, reduced into [0,1)^d.
class Grid {
public:
    Grid() = default;
    Grid(Lattice lattice, ScalarVec translation_coords)
        : lattice_(std::move(lattice)), coords_(std::move(translation_coords)) {
        if ((int)coords_.size() != lattice_.dim())
            throw std::invalid_argument("Grid: translation dimension mismatch");
        reduce();
    }

    static Grid lattice_only(Lattice x) {
        int d = x.dim();
        return Grid(std::move(x), ScalarVec(d, Scalar(Rat(0))));
    }

    const Lattice& lattice() const { return lattice_; }
    const ScalarVec& coords() const { return coords_; }

    bool has_rational_coords() const {
        for (const Scalar& c : coords_)
            if (!c.is_rational()) return false;
        return true;
    }

    std::vector<Rat> coords_as_rats() const {
        std::vector<Rat> r;
        for (const Scalar& c : coords_) {
            auto v = c.rational_value();
            if (!v) throw std::domain_error("Grid: translation is not rational");
            r.push_back(*v);
        }
        return r;
    }

    bool translation_is_zero() const {
        for (const Scalar& c : coords_)
            if (!(c.is_rational() && c.rational_value()->is_zero())) return false;
        return true;
    }

    /// Ambient translation vector v = B * coords.
    ScalarVec translation_vector() const {
        ScalarVec v(lattice_.dim(), Scalar(Rat(0)));
        for (int i = 0; i < lattice_.dim(); ++i)
            for (int j = 0; j < lattice_.dim(); ++j) {
                if (auto r = lattice_.basis()(i, j).rational_value())
                    v[i] += *r * coords_[j];
                else
                    v[i] += lattice_.basis()(i, j) * coords_[j];
            }
        return v;
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        if (a.lattice_.dim() != b.lattice_.dim()) return false;
        for (int j = 0; j < a.lattice_.dim(); ++j)
            if (!(a.coords_[j] - b.coords_[j]).is_zero()) return false;
        // same lattice check is the caller's concern for non-rational bases
        if (a.lattice_.has_rational_basis() && b.lattice_.has_rational_basis())
            return same_column_lattice(a.lattice_.rational_basis(), b.lattice_.rational_basis());
        return true;
    }

private:
    void reduce() {
        for (Scalar& c : coords_) {
            Int f = floor_exact(c);
            if (f != 0) c = c - Scalar(Rat(f));
        }
    }

    Lattice lattice_;
    ScalarVec coords_;
};

/// ny = x + n v. The projection to the lattice space is unchanged.
inline Grid scale_grid(const Grid& y, const Int& n) {
    if (n == 0) throw std::invalid_argument("scale_grid: n must be nonzero");
    ScalarVec c = y.coords();
    for (Scalar& s : c) s = Rat(n) * s;
    return Grid(y.lattice(), std::move(c));
}

/// The block embedding of a grid as a (d+1)-dimensional lattice:
/// columns (g | v), bottom row (0 ... 0 1).
inline Lattice tau_embed(const Grid& y) {
    if (!y.lattice().is_unimodular())
        throw std::invalid_argument("tau_embed: lattice must be unimodular");
    int d = y.lattice().dim();
    ScalarMat b(d + 1, d + 1, Scalar(Rat(0)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i, j) = y.lattice().basis()(i, j);
    ScalarVec v = y.translation_vector();
    for (int i = 0; i < d; ++i) b(i, d) = v[i];
    b(d, d) = Scalar(Rat(1));
    std::optional<Rat> cs;
    if (y.lattice().covol_sq()) cs = y.lattice().covol_sq();  // det is unchanged
    return Lattice(std::move(b), cs, y.lattice().normalized());
}

struct GridPoint {
    std::vector<Int> coeffs;  // lattice coefficients m
    ScalarVec value;          // B (m + c)
    bool norm_certified = true;
};

struct EnumerationResult {
    std::vector<GridPoint> points;
    bool complete = true;  // false only on precision exhaustion (never silent)
};

namespace detail {

/// Per-row upper bounds on the absolute row sums of B^{-1}: since
/// m + c = B^{-1} w, the box |(m + c)_j| <= bounds[j] * ||w||_inf is complete.
inline std::vector<Rat> inverse_row_bounds(const Lattice& x) {
    if (x.has_rational_basis()) {
        RatMat inv = inverse(x.rational_basis());
        std::vector<Rat> bounds(inv.rows(), Rat(0));
        for (int i = 0; i < inv.rows(); ++i)
            for (int j = 0; j < inv.cols(); ++j) bounds[i] += inv(i, j).abs();
        return bounds;
    }
    Rat w(1, 1 << 20);
    while (w >= precision_floor()) {
        Matrix<Interval> m = x.interval_basis(w);
        // interval Gauss-Jordan; fail -> refine
        int n = m.rows();
        Matrix<Interval> inv(n, n, Interval(Rat(0)));
        for (int i = 0; i < n; ++i) inv(i, i) = Interval(Rat(1));
        bool ok = true;
        for (int c = 0; c < n && ok; ++c) {
            int piv = -1;
            Rat best(0);
            for (int r = c; r < n; ++r) {
                if (m(r, c).contains_zero()) continue;
                Rat mag = std::min(m(r, c).lo().abs(), m(r, c).hi().abs());
                if (piv < 0 || mag > best) {
                    piv = r;
                    best = mag;
                }
            }
            if (piv < 0) {
                ok = false;
                break;
            }
            if (piv != c)
                for (int j = 0; j < n; ++j) {
                    std::swap(m(piv, j), m(c, j));
                    std::swap(inv(piv, j), inv(c, j));
                }
            Interval p = m(c, c);
            for (int j = 0; j < n; ++j) {
                m(c, j) = m(c, j) / p;
                inv(c, j) = inv(c, j) / p;
            }
            for (int r = 0; r < n; ++r) {
                if (r == c) continue;
                Interval f = m(r, c);
                if (f.lo().is_zero() && f.hi().is_zero()) continue;
                for (int j = 0; j < n; ++j) {
                    m(r, j) -= f * m(c, j);
                    inv(r, j) -= f * inv(c, j);
                }
            }
        }
        if (ok) {
            std::vector<Rat> bounds(inv.rows(), Rat(0));
            for (int i = 0; i < inv.rows(); ++i)
                for (int j = 0; j < inv.cols(); ++j)
                    bounds[i] += std::max(inv(i, j).lo().abs(), inv(i, j).hi().abs());
            return bounds;
        }
        w = w / 16;
    }
    throw std::runtime_error("inverse_row_bounds: precision floor reached");
}

}  // namespace detail

/// Complete enumeration of grid vectors with certified sup-norm <= R.
/// Vectors whose norm straddles R at the precision floor are included and
/// flagged, never silently dropped.
inline EnumerationResult enumerate_grid_points(const Grid& y, const Rat& R) {
    if (R.sign() <= 0) throw std::invalid_argument("enumerate_grid_points: R must be positive");
    if (!y.lattice().certified_nonsingular())
        throw std::invalid_argument("enumerate_grid_points: basis not certified nonsingular");
    int d = y.lattice().dim();
    std::vector<Rat> row_bounds = detail::inverse_row_bounds(y.lattice());

    // coefficient box: |m_j + c_j| <= row_bounds[j] * R
    std::vector<Int> lo(d), hi(d);
    for (int j = 0; j < d; ++j) {
        Rat S = row_bounds[j] * R;
        Interval cj = y.coords()[j].is_rational() ? Interval(*y.coords()[j].rational_value())
                                                  : y.coords()[j].approx(Rat(1, 1 << 10));
        lo[j] = (-cj.hi() - S).floor();
        hi[j] = (-cj.lo() + S).ceil();
    }

    EnumerationResult out;
    bool rational = y.lattice().has_rational_basis() && y.has_rational_coords();
    RatMat B;
    if (rational) B = y.lattice().rational_basis();

    std::vector<Int> m = lo;
    while (true) {
        // value = B (m + c)
        GridPoint pt;
        pt.coeffs = m;
        bool keep = true, flagged = false;
        if (rational) {
            std::vector<Rat> mc(d);
            for (int j = 0; j < d; ++j) mc[j] = Rat(m[j]) + *y.coords()[j].rational_value();
            std::vector<Rat> w = B * mc;
            for (int i = 0; i < d; ++i)
                if (w[i].abs() > R) {
                    keep = false;
                    break;
                }
            if (keep) {
                pt.value.reserve(d);
                for (int i = 0; i < d; ++i) pt.value.emplace_back(w[i]);
            }
        } else {
            ScalarVec mc(d);
            for (int j = 0; j < d; ++j) mc[j] = Scalar(Rat(m[j])) + y.coords()[j];
            ScalarVec w(d, Scalar(Rat(0)));
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    auto bij = y.lattice().basis()(i, j);
                    if (auto r = bij.rational_value())
                        w[i] += *r * mc[j];
                    else if (auto mij = Scalar::try_mul(bij, mc[j]))
                        w[i] += *mij;
                    else
                        throw std::runtime_error(
                            "enumerate_grid_points: mixed-root basis/coordinate product");
                }
            for (int i = 0; i < d && keep; ++i) {
                // certified |w_i| <= R?
                Rat prec(1, 1 << 10);
                while (true) {
                    Interval iv = w[i].approx(prec).abs();
                    if (iv.hi() <= R) break;        // inside
                    if (iv.lo() > R) {              // outside
                        keep = false;
                        break;
                    }
                    if (prec < precision_floor()) {  // straddles at the floor
                        flagged = true;
                        out.complete = false;
                        break;
                    }
                    prec = prec / 16;
                }
            }
            if (keep) pt.value = std::move(w);
        }
        if (keep) {
            pt.norm_certified = !flagged;
            out.points.push_back(std::move(pt));
        }
        // odometer
        int j = 0;
        while (j < d) {
            if (m[j] < hi[j]) {
                ++m[j];
                break;
            }
            m[j] = lo[j];
            ++j;
        }
        if (j == d) break;
    }
    return out;
}

/// A grid vector certifying an upper bound for the grid's product minimum
/// (or the GLC quantity when n != 0). Re-verifiable: recomputing N on the
/// stored data reproduces the bound exactly.
struct WitnessRecord {
    std::string grid_id;
    std::vector<Int> coeffs;  // lattice part m
    Int n = 0;                // scaling index (tau context); 0 for plain grid minima
    ProductValue bound;
    Rat region_radius = Rat(0);
    Int n_max = 0;
    std::string config_hash;
};

namespace detail {

inline bool diagonal_rational(const Lattice& x) {
    if (!x.has_rational_basis()) return false;
    RatMat b = x.rational_basis();
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j)
            if (i != j && !b(i, j).is_zero()) return false;
    return true;
}

}  // namespace detail

/// Minimum of |N(w)| over grid vectors with certified sup-norm <= R.
/// Exact for rational data; for algebraic data the returned bound is a
/// certified upper bound. Monotone nonincreasing in R.
inline std::pair<ProductValue, WitnessRecord> grid_min_product(const Grid& y, const Rat& R) {
    if (R.sign() <= 0) throw std::invalid_argument("grid_min_product: R must be positive");
    int d = y.lattice().dim();

    // independent-coordinate fast path: diagonal rational basis
    if (detail::diagonal_rational(y.lattice()) && y.has_rational_coords()) {
        RatMat B = y.lattice().rational_basis();
        std::vector<Int> m(d);
        Rat prod(1);
        bool feasible = true;
        ScalarVec w(d, Scalar(Rat(0)));
        for (int j = 0; j < d; ++j) {
            Rat c = *y.coords()[j].rational_value();
            Int nearest = (-c).round_nearest();
            Rat val = (B(j, j) * (Rat(nearest) + c)).abs();
            if (val > R) {
                feasible = false;
                break;
            }
            m[j] = nearest;
            prod *= val;
            w[j] = Scalar(B(j, j) * (Rat(nearest) + c));
        }
        if (feasible) {
            WitnessRecord rec;
            rec.coeffs = m;
            rec.bound.exact = prod;
            rec.bound.box = Interval(prod);
            rec.region_radius = R;
            ProductValue pv = rec.bound;
            return {pv, rec};
        }
        throw std::domain_error("grid_min_product: no grid vector within radius R");
    }

    EnumerationResult en = enumerate_grid_points(y, R);
    if (en.points.empty())
        throw std::domain_error("grid_min_product: no grid vector within radius R");
    const GridPoint* best = nullptr;
    ProductValue best_pv;
    for (const GridPoint& pt : en.points) {
        ProductValue pv = product_form(pt.value);
        bool better = false;
        if (!best) {
            better = true;
        } else if (pv.upper_abs() < best_pv.upper_abs()) {
            better = true;
        } else if (pv.exact && best_pv.exact && pv.exact->abs() == best_pv.exact->abs()) {
            better = std::lexicographical_compare(pt.coeffs.begin(), pt.coeffs.end(),
                                                  best->coeffs.begin(), best->coeffs.end());
        }
        if (better) {
            best = &pt;
            best_pv = pv;
        }
    }
    WitnessRecord rec;
    rec.coeffs = best->coeffs;
    rec.bound = best_pv;
    rec.region_radius = R;
    return {best_pv, rec};
}

/// Bounded realization of the GLC infimum through the tau-embedding:
/// min |N(w)| over w in tau_y with ||w|| <= R and 0 < |w_{d+1}| <= n_max.
/// Ties break lexicographically on (|n|, m). Monotone in R and n_max.
inline std::pair<ProductValue, WitnessRecord> littlewood_witness_search(const Grid& y,
                                                                        const Rat& R,
                                                                        const Int& n_max) {
    if (R.sign() <= 0 || n_max < 1)
        throw std::invalid_argument("littlewood_witness_search: need R > 0 and n_max >= 1");
    std::optional<ProductValue> best;
    WitnessRecord best_rec;
    Int n_cap = std::min(n_max, R.floor());
    for (Int n = 1; n <= n_cap; ++n) {
        // slice w = (u, n), u in ny: |N(w)| = |n| * |N(u)|
        Grid ny = scale_grid(y, n);
        auto [pv, rec] = grid_min_product(ny, R);
        ProductValue scaled;
        scaled.scale_exp = pv.scale_exp;
        if (pv.exact) scaled.exact = Rat(n) * pv.exact->abs();
        scaled.box = Interval(Rat(n)) * pv.box.abs();
        if (!best || scaled.upper_abs() < best->upper_abs()) {
            best = scaled;
            best_rec = rec;
            best_rec.n = n;
            best_rec.region_radius = R;
            best_rec.n_max = n_max;
            best_rec.bound = scaled;
        }
        if (best->is_exact_zero()) break;  // cannot improve on an exact zero
    }
    if (!best) throw std::domain_error("littlewood_witness_search: empty search region");
    return {*best, best_rec};
}

struct ShortestVectorResult {
    Interval norm;            // point interval in the exact rational case
    ScalarVec vector;         // a vector attaining the norm
    std::vector<Int> coeffs;  // its coefficients with respect to the input basis
};

/// Certified shortest nonzero vector in the sup-norm. Exact for rational
/// bases (LLL preconditioning + complete coefficient-box enumeration).
inline ShortestVectorResult shortest_vector(const Lattice& x, const Rat& tol = Rat(1, 1 << 20)) {
    if (!x.certified_nonsingular())
        throw std::invalid_argument("shortest_vector: basis not certified nonsingular");
    int d = x.dim();
    if (x.has_rational_basis()) {
        RatMat B = x.rational_basis();
        IntMat u;
        RatMat red = lll_reduce_columns(B, &u);
        // initial bound: the shortest reduced basis column
        Rat bound(0);
        for (int j = 0; j < d; ++j) {
            Rat n(0);
            for (int i = 0; i < d; ++i) n = std::max(n, red(i, j).abs());
            if (j == 0 || n < bound) bound = n;
        }
        Lattice redlat = Lattice::from_rational(red);
        EnumerationResult en = enumerate_grid_points(Grid::lattice_only(redlat), bound);
        Rat best = bound;
        std::vector<Rat> best_vec;
        std::vector<Int> best_red_coeffs;
        for (const GridPoint& pt : en.points) {
            bool zero = true;
            Rat n(0);
            for (int i = 0; i < d; ++i) {
                Rat v = *pt.value[i].rational_value();
                if (!v.is_zero()) zero = false;
                n = std::max(n, v.abs());
            }
            if (zero) continue;
            if (best_vec.empty() || n < best) {
                best = n;
                best_vec.clear();
                for (int i = 0; i < d; ++i) best_vec.push_back(*pt.value[i].rational_value());
                best_red_coeffs = pt.coeffs;
            }
        }
        ShortestVectorResult res;
        res.norm = Interval(best);
        for (const Rat& v : best_vec) res.vector.emplace_back(v);
        // coefficients in the original basis: red = B * U, so m = U * m_red
        res.coeffs.assign(d, Int(0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) res.coeffs[i] += u(i, j) * best_red_coeffs[j];
        return res;
    }

    // algebraic basis: precondition with LLL on a rational midpoint proxy
    // (the unimodular change of basis is applied exactly), then enumerate
    // intervals at shrinking widths
    RatMat mid(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) mid(i, j) = x.basis()(i, j).approx(Rat(1, Int(1) << 48)).mid();
    IntMat u;
    if (det(mid).is_zero())
        u = IntMat::identity(d);
    else
        lll_reduce_columns(mid, &u);
    ScalarMat pre(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            Scalar s;
            for (int k = 0; k < d; ++k) s += Rat(u(k, j)) * x.basis()(i, k);
            pre(i, j) = s;
        }
    Lattice xp(pre, x.covol_sq(), x.normalized());

    Rat prec(1, 1 << 10);
    while (true) {
        Rat bound(0);
        for (int j = 0; j < d; ++j) {
            Rat n(0);
            for (int i = 0; i < d; ++i)
                n = std::max(n, xp.basis()(i, j).approx(prec).abs().hi());
            if (j == 0 || n < bound) bound = n;
        }
        EnumerationResult en = enumerate_grid_points(Grid::lattice_only(xp), bound);
        std::optional<Interval> best;
        ScalarVec best_vec;
        std::vector<Int> best_coeffs;
        for (const GridPoint& pt : en.points) {
            bool zero = true;
            for (const Int& c : pt.coeffs)
                if (c != 0) zero = false;
            if (zero) continue;
            // sup-norm enclosure: max over coordinates of |w_i|
            Rat lo(0), hi(0);
            for (const Scalar& s : pt.value) {
                Interval a = s.approx(prec).abs();
                lo = std::max(lo, a.lo());
                hi = std::max(hi, a.hi());
            }
            Interval norm(lo, hi);
            if (!best || norm.hi() < best->hi()) {
                best = norm;
                best_vec = pt.value;
                best_coeffs = pt.coeffs;
            }
        }
        if (best && best->width() <= tol && best->lo().sign() > 0) {
            // map coefficients back through the preconditioner: m = U m'
            std::vector<Int> coeffs(d, Int(0));
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) coeffs[i] += u(i, j) * best_coeffs[j];
            return {*best, best_vec, coeffs};
        }
        if (prec < precision_floor())
            throw std::runtime_error("shortest_vector: precision floor reached");
        prec = prec / 16;
    }
}

/// Same lattice, LLL-reduced basis (delta = 3/4); the integer unimodular
/// change of basis is checked to have determinant +-1.
inline Lattice lll_reduce(const Lattice& x) {
    RatMat B = x.rational_basis();
    IntMat u;
    RatMat red = lll_reduce_columns(B, &u);
    Int du = det(u);
    if (du != 1 && du != -1) throw std::logic_error("lll_reduce: transform not unimodular");
    return Lattice(
        [&] {
            ScalarMat b(red.rows(), red.cols());
            for (int i = 0; i < red.rows(); ++i)
                for (int j = 0; j < red.cols(); ++j) b(i, j) = Scalar(red(i, j));
            return b;
        }(),
        x.covol_sq(), x.normalized());
}

inline Lattice direct_sum(const Lattice& a, const Lattice& b) {
    if (!a.is_unimodular() || !b.is_unimodular())
        throw std::invalid_argument("direct_sum: both lattices must be unimodular");
    int da = a.dim(), db = b.dim();
    ScalarMat m(da + db, da + db, Scalar(Rat(0)));
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) m(i, j) = a.basis()(i, j);
    for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j) m(da + i, da + j) = b.basis()(i, j);
    std::optional<Rat> cs;
    if (a.covol_sq() && b.covol_sq()) cs = *a.covol_sq() * *b.covol_sq();
    return Lattice(std::move(m), cs, a.normalized() || b.normalized());
}

}  // namespace glc
