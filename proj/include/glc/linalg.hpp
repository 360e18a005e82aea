#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "glc/interval.hpp"
#include "glc/rational.hpp"
#include "glc/scalar.hpp"

namespace glc {

/// Minimal dense matrix, row-major. Columns are the natural basis-vector
/// containers throughout this project.
template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, const T& fill = T())
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n, T(0));
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    std::vector<T> column(int j) const {
        std::vector<T> c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    void set_column(int j, const std::vector<T>& c) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: dimension mismatch");
        Matrix r(a.rows_, b.cols_, T(0));
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k)
                for (int j = 0; j < b.cols_; ++j) r(i, j) += a(i, k) * b(k, j);
        return r;
    }

    std::vector<T> operator*(const std::vector<T>& v) const {
        if ((int)v.size() != cols_) throw std::invalid_argument("Matrix: dimension mismatch");
        std::vector<T> r(rows_, T(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    int rows_, cols_;
    std::vector<T> data_;
};

using RatMat = Matrix<Rat>;
using IntMat = Matrix<Int>;

inline Rat det(const RatMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: square matrix required");
    int n = m.rows();
    RatMat a = m;
    Rat d(1);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (!a(r, c).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return Rat(0);
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
            d = -d;
        }
        d *= a(c, c);
        Rat inv = Rat(1) / a(c, c);
        for (int r = c + 1; r < n; ++r) {
            Rat f = a(r, c) * inv;
            if (f.is_zero()) continue;
            for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
        }
    }
    return d;
}

inline RatMat inverse(const RatMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: square matrix required");
    int n = m.rows();
    RatMat a = m, inv = RatMat::identity(n);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (!a(r, c).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::domain_error("inverse: singular matrix");
        if (piv != c)
            for (int j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(c, j));
                std::swap(inv(piv, j), inv(c, j));
            }
        Rat f = Rat(1) / a(c, c);
        for (int j = 0; j < n; ++j) {
            a(c, j) *= f;
            inv(c, j) *= f;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || a(r, c).is_zero()) continue;
            Rat g = a(r, c);
            for (int j = 0; j < n; ++j) {
                a(r, j) -= g * a(c, j);
                inv(r, j) -= g * inv(c, j);
            }
        }
    }
    return inv;
}

inline std::vector<Rat> solve(const RatMat& m, const std::vector<Rat>& b) {
    return inverse(m) * b;
}

/// Max row sum of absolute values (the operator infinity-norm).
inline Rat op_norm_inf(const RatMat& m) {
    Rat best(0);
    for (int i = 0; i < m.rows(); ++i) {
        Rat s(0);
        for (int j = 0; j < m.cols(); ++j) s += m(i, j).abs();
        best = std::max(best, s);
    }
    return best;
}

inline bool is_integer_matrix(const RatMat& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_integer()) return false;
    return true;
}

inline IntMat to_integer_matrix(const RatMat& m) {
    IntMat r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (!m(i, j).is_integer()) throw std::domain_error("matrix entry is not an integer");
            r(i, j) = m(i, j).num();
        }
    return r;
}

inline RatMat to_rational_matrix(const IntMat& m) {
    RatMat r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

inline Int det(const IntMat& m) { return det(to_rational_matrix(m)).num(); }

/// Column-style Hermite normal form. Column operations only, so the column
/// span (the lattice generated by the columns) is preserved. Returns H in
/// lower-triangular HNF; if `transform` is given it receives U with
/// A * U = H, det U = +-1.
inline IntMat hermite_normal_form(IntMat a, IntMat* transform = nullptr) {
    int m = a.rows(), n = a.cols();
    IntMat u = IntMat::identity(n);
    auto col_swap = [&](int i, int j) {
        for (int r = 0; r < m; ++r) std::swap(a(r, i), a(r, j));
        for (int r = 0; r < n; ++r) std::swap(u(r, i), u(r, j));
    };
    auto col_axpy = [&](int dst, int src, const Int& f) {  // col dst -= f * col src
        for (int r = 0; r < m; ++r) a(r, dst) -= f * a(r, src);
        for (int r = 0; r < n; ++r) u(r, dst) -= f * u(r, src);
    };
    auto col_neg = [&](int j) {
        for (int r = 0; r < m; ++r) a(r, j) = -a(r, j);
        for (int r = 0; r < n; ++r) u(r, j) = -u(r, j);
    };

    int row = 0, col = 0;
    while (row < m && col < n) {
        // gcd out the row entries right of `col`
        while (true) {
            int piv = -1;
            for (int j = col; j < n; ++j)
                if (a(row, j) != 0 && (piv < 0 || ::abs(a(row, j)) < ::abs(a(row, piv)))) piv = j;
            if (piv < 0) break;
            if (piv != col) col_swap(col, piv);
            bool done = true;
            for (int j = col + 1; j < n; ++j) {
                if (a(row, j) == 0) continue;
                Int f;
                mpz_tdiv_q(f.get_mpz_t(), a(row, j).get_mpz_t(), a(row, col).get_mpz_t());
                col_axpy(j, col, f);
                if (a(row, j) != 0) done = false;
            }
            if (done) break;
        }
        if (a(row, col) != 0) {
            if (a(row, col) < 0) col_neg(col);
            // reduce entries left of the pivot into [0, pivot)
            for (int j = 0; j < col; ++j) {
                Int f;
                mpz_fdiv_q(f.get_mpz_t(), a(row, j).get_mpz_t(), a(row, col).get_mpz_t());
                if (f != 0) col_axpy(j, col, f);
            }
            ++col;
        }
        ++row;
    }
    if (transform) *transform = u;
    return a;
}

/// Basis of the integer kernel {x : A x = 0} of an integer matrix.
inline std::vector<std::vector<Int>> integer_kernel(const IntMat& a) {
    IntMat u;
    IntMat h = hermite_normal_form(a, &u);
    std::vector<std::vector<Int>> ker;
    for (int j = 0; j < h.cols(); ++j) {
        bool zero = true;
        for (int i = 0; i < h.rows(); ++i)
            if (h(i, j) != 0) {
                zero = false;
                break;
            }
        if (zero) ker.push_back(u.column(j));
    }
    return ker;
}

/// Two integer matrices generate the same column lattice iff their HNFs agree
/// (after dropping zero columns).
inline IntMat hnf_canonical(const IntMat& a) {
    IntMat h = hermite_normal_form(a);
    // drop all-zero columns for a canonical shape
    std::vector<int> keep;
    for (int j = 0; j < h.cols(); ++j) {
        bool zero = true;
        for (int i = 0; i < h.rows(); ++i)
            if (h(i, j) != 0) zero = false;
        if (!zero) keep.push_back(j);
    }
    IntMat r(h.rows(), (int)keep.size());
    for (size_t j = 0; j < keep.size(); ++j)
        for (int i = 0; i < h.rows(); ++i) r(i, (int)j) = h(i, keep[j]);
    return r;
}

/// Same rational column lattice: clear denominators jointly, compare HNFs.
inline bool same_column_lattice(const RatMat& a, const RatMat& b) {
    Int l(1);
    auto lcm_dens = [&](const RatMat& m) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).den().get_mpz_t());
    };
    lcm_dens(a);
    lcm_dens(b);
    auto scaled = [&](const RatMat& m) {
        IntMat r(m.rows(), m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) {
                Rat x = m(i, j) * Rat(l);
                r(i, j) = x.num();
            }
        return r;
    };
    return hnf_canonical(scaled(a)) == hnf_canonical(scaled(b));
}

/// Exact LLL reduction (delta = 3/4) of the columns of a nonsingular
/// rational matrix. Returns the reduced basis; `transform` receives the
/// integer unimodular U with B_reduced = B * U.
inline RatMat lll_reduce_columns(const RatMat& basis, IntMat* transform = nullptr,
                                 const Rat& delta = Rat(3, 4)) {
    int n = basis.cols(), m = basis.rows();
    RatMat b = basis;
    IntMat u = IntMat::identity(n);

    auto dot = [&](int i, int j) {
        Rat s(0);
        for (int r = 0; r < m; ++r) s += b(r, i) * b(r, j);
        return s;
    };

    // Gram-Schmidt data, recomputed lazily after changes
    std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n, Rat(0)));
    std::vector<Rat> bstar_norm(n, Rat(0));
    auto recompute_gs = [&]() {
        std::vector<std::vector<Rat>> star(n, std::vector<Rat>(m, Rat(0)));
        for (int i = 0; i < n; ++i) {
            for (int r = 0; r < m; ++r) star[i][r] = b(r, i);
            for (int j = 0; j < i; ++j) {
                Rat num(0);
                for (int r = 0; r < m; ++r) num += b(r, i) * star[j][r];
                mu[i][j] = bstar_norm[j].is_zero() ? Rat(0) : num / bstar_norm[j];
                for (int r = 0; r < m; ++r) star[i][r] -= mu[i][j] * star[j][r];
            }
            Rat nn(0);
            for (int r = 0; r < m; ++r) nn += star[i][r] * star[i][r];
            bstar_norm[i] = nn;
        }
    };
    (void)dot;

    recompute_gs();
    int k = 1;
    while (k < n) {
        // size reduction
        for (int j = k - 1; j >= 0; --j) {
            Int q = mu[k][j].round_nearest();
            if (q != 0) {
                for (int r = 0; r < m; ++r) b(r, k) -= Rat(q) * b(r, j);
                for (int r = 0; r < n; ++r) u(r, k) -= q * u(r, j);
                recompute_gs();
            }
        }
        if (bstar_norm[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar_norm[k - 1]) {
            ++k;
        } else {
            for (int r = 0; r < m; ++r) std::swap(b(r, k), b(r, k - 1));
            for (int r = 0; r < n; ++r) std::swap(u(r, k), u(r, k - 1));
            recompute_gs();
            k = std::max(k - 1, 1);
        }
    }
    if (transform) *transform = u;
    return b;
}

}  // namespace glc
