#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <random>

#include "glc/lattice.hpp"

using namespace glc;

namespace {

std::mt19937 rng(1234);

Rat random_rat(long num_range, long den_max) {
    long n = (long)(rng() % (2 * num_range + 1)) - num_range;
    long d = 1 + (long)(rng() % den_max);
    return Rat(n, d);
}

RatMat random_nonsingular(int d, long range = 4) {
    // reject near-singular draws so enumeration boxes stay small
    while (true) {
        RatMat m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = random_rat(range, 3);
        if (!det(m).is_zero() && op_norm_inf(inverse(m)) <= Rat(4)) return m;
    }
}

Grid rational_grid(const RatMat& basis, const std::vector<Rat>& coords) {
    ScalarVec c;
    for (const Rat& r : coords) c.emplace_back(r);
    return Grid(Lattice::from_rational(basis), std::move(c));
}

/// Independent oracle: all grid vectors B(m + c) with sup-norm <= R, found
/// by walking a generously padded coefficient box computed from the exact
/// inverse.
std::vector<std::pair<std::vector<Int>, std::vector<Rat>>> brute_points(const RatMat& B,
                                                                        const std::vector<Rat>& c,
                                                                        const Rat& R) {
    int d = B.rows();
    Rat S = op_norm_inf(inverse(B)) * R + Rat(1);
    std::vector<long> lo(d), hi(d);
    for (int j = 0; j < d; ++j) {
        lo[j] = (long)((-c[j] - S).floor().get_si());
        hi[j] = (long)((-c[j] + S).ceil().get_si());
    }
    std::vector<std::pair<std::vector<Int>, std::vector<Rat>>> out;
    std::vector<long> m(d);
    for (int j = 0; j < d; ++j) m[j] = lo[j];
    while (true) {
        std::vector<Rat> mc(d);
        for (int j = 0; j < d; ++j) mc[j] = Rat(m[j]) + c[j];
        std::vector<Rat> w = B * mc;
        bool ok = true;
        for (int i = 0; i < d; ++i)
            if (w[i].abs() > R) ok = false;
        if (ok) {
            std::vector<Int> mi(d);
            for (int j = 0; j < d; ++j) mi[j] = Int(m[j]);
            out.emplace_back(mi, w);
        }
        int j = 0;
        while (j < d && ++m[j] > hi[j]) m[j] = lo[j], ++j;
        if (j == d) break;
    }
    return out;
}

Rat abs_product(const std::vector<Rat>& w) {
    Rat p(1);
    for (const Rat& x : w) p *= x;
    return p.abs();
}

}  // namespace

TEST_CASE("product form is exact on rational vectors") {
    ScalarVec w{Scalar(Rat(2, 3)), Scalar(Rat(-3, 5)), Scalar(Rat(10))};
    ProductValue pv = product_form(w);
    REQUIRE(pv.exact.has_value());
    CHECK(*pv.exact == Rat(-4));
    CHECK(pv.box.is_point());
}

TEST_CASE("product form detects an exact algebraic zero coordinate") {
    auto roots = AlgebraicReal::isolate_real_roots(IntPoly({-2, 0, 1}));  // x^2 - 2
    auto sqrt2 = std::make_shared<AlgebraicReal>(roots[1]);
    Scalar z = Scalar::root_value(sqrt2) - Scalar::root_value(sqrt2);
    ScalarVec w{Scalar(Rat(7)), z, Scalar::root_value(sqrt2)};
    ProductValue pv = product_form(w);
    REQUIRE(pv.exact.has_value());
    CHECK(pv.exact->is_zero());
}

TEST_CASE("product form encloses irrational products") {
    auto roots = AlgebraicReal::isolate_real_roots(IntPoly({-2, 0, 1}));
    auto sqrt2 = std::make_shared<AlgebraicReal>(roots[1]);
    ScalarVec w{Scalar::root_value(sqrt2), Scalar::root_value(sqrt2)};
    ProductValue pv = product_form(w, Rat(1, 1 << 30));
    CHECK_FALSE(pv.exact.has_value());
    CHECK(pv.box.contains(Rat(2)));
    CHECK(pv.box.width() < Rat(1, 1000));
}

TEST_CASE("grid translation coordinates reduce into [0,1)") {
    Grid y = rational_grid(RatMat::identity(2), {Rat(7, 3), Rat(-1, 4)});
    CHECK(*y.coords()[0].rational_value() == Rat(1, 3));
    CHECK(*y.coords()[1].rational_value() == Rat(3, 4));
}

TEST_CASE("scale_grid multiplies the translation and keeps the lattice") {
    Grid y = rational_grid(RatMat::identity(2), {Rat(1, 3), Rat(1, 4)});
    Grid y2 = scale_grid(y, 2);
    CHECK(*y2.coords()[0].rational_value() == Rat(2, 3));
    CHECK(*y2.coords()[1].rational_value() == Rat(1, 2));
    // at n = lcm of denominators the scaled grid collapses to the lattice
    Grid y12 = scale_grid(y, 12);
    CHECK(y12.translation_is_zero());
    CHECK(scale_grid(y, 1) == y);
}

TEST_CASE("tau embedding has the block shape and preserves covolume") {
    Grid y = rational_grid(RatMat::identity(2), {Rat(1, 3), Rat(1, 4)});
    Lattice t = tau_embed(y);
    REQUIRE(t.dim() == 3);
    RatMat b = t.rational_basis();
    CHECK(b(0, 0) == Rat(1));
    CHECK(b(1, 1) == Rat(1));
    CHECK(b(0, 2) == Rat(1, 3));
    CHECK(b(1, 2) == Rat(1, 4));
    CHECK(b(2, 0) == Rat(0));
    CHECK(b(2, 1) == Rat(0));
    CHECK(b(2, 2) == Rat(1));
    CHECK(det(b).abs() == Rat(1));
    // non-unimodular lattices are rejected
    RatMat two = RatMat::identity(2);
    two(0, 0) = Rat(2);
    CHECK_THROWS(tau_embed(rational_grid(two, {Rat(0), Rat(0)})));
}

TEST_CASE("enumeration of the standard lattice ball") {
    auto en = enumerate_grid_points(Grid::lattice_only(Lattice::standard(2)), Rat(1));
    CHECK(en.complete);
    CHECK(en.points.size() == 9);  // {-1,0,1}^2
}

TEST_CASE("enumeration agrees with the brute-force oracle") {
    for (int trial = 0; trial < 10; ++trial) {
        int d = 2 + (int)(rng() % 2);
        RatMat B = random_nonsingular(d, 2);
        std::vector<Rat> c(d);
        for (int j = 0; j < d; ++j) c[j] = random_rat(2, 5);
        Rat R(1 + (long)(rng() % 2));
        Grid y = rational_grid(B, c);
        auto en = enumerate_grid_points(y, R);
        REQUIRE(en.complete);
        auto oracle = brute_points(B, y.coords_as_rats(), R);
        REQUIRE(en.points.size() == oracle.size());
        // match as sets of coefficient vectors
        for (const auto& [mi, w] : oracle) {
            bool found = false;
            for (const auto& pt : en.points)
                if (pt.coeffs == mi) {
                    found = true;
                    for (int i = 0; i < d; ++i) CHECK(*pt.value[i].rational_value() == w[i]);
                }
            CHECK(found);
        }
    }
}

TEST_CASE("grid_min_product matches brute force and is monotone in R") {
    for (int trial = 0; trial < 10; ++trial) {
        int d = 2 + (int)(rng() % 2);
        RatMat B = random_nonsingular(d, 2);
        std::vector<Rat> c(d);
        for (int j = 0; j < d; ++j) c[j] = random_rat(2, 5);
        Grid y = rational_grid(B, c);
        Rat R1(1), R2(2);
        auto [pv1, rec1] = grid_min_product(y, R1);
        auto [pv2, rec2] = grid_min_product(y, R2);
        REQUIRE(pv1.exact.has_value());
        CHECK(*pv2.exact <= *pv1.exact);  // larger region can only improve
        auto oracle = brute_points(B, y.coords_as_rats(), R1);
        REQUIRE(!oracle.empty());
        Rat best = abs_product(oracle[0].second);
        for (const auto& [mi, w] : oracle) best = std::min(best, abs_product(w));
        CHECK(pv1.exact->abs() == best);
        // the witness re-verifies: recompute B(m + c) and its product
        std::vector<Rat> mc(d);
        for (int j = 0; j < d; ++j) mc[j] = Rat(rec1.coeffs[j]) + y.coords_as_rats()[j];
        CHECK(abs_product(B * mc) == pv1.exact->abs());
    }
}

TEST_CASE("diagonal fast path agrees with the generic enumeration") {
    for (int trial = 0; trial < 20; ++trial) {
        int d = 2 + (int)(rng() % 2);
        RatMat B(d, d);
        for (int j = 0; j < d; ++j) {
            Rat v = random_rat(3, 2);
            B(j, j) = v.is_zero() ? Rat(1) : v;
        }
        std::vector<Rat> c(d);
        for (int j = 0; j < d; ++j) c[j] = random_rat(2, 5);
        Grid y = rational_grid(B, c);
        Rat R(4);
        auto [fast, frec] = grid_min_product(y, R);  // takes the diagonal path
        auto oracle = brute_points(B, y.coords_as_rats(), R);
        Rat best = abs_product(oracle[0].second);
        for (const auto& [mi, w] : oracle) best = std::min(best, abs_product(w));
        CHECK(fast.exact->abs() == best);
    }
}

TEST_CASE("witness search equals the direct (m, n) brute force") {
    for (int trial = 0; trial < 10; ++trial) {
        int d = 2 + (int)(rng() % 2);
        RatMat B = random_nonsingular(d, 2);
        std::vector<Rat> c(d);
        for (int j = 0; j < d; ++j) c[j] = random_rat(2, 5);
        Grid y = rational_grid(B, c);
        Rat R(2 + (long)(rng() % 2));
        Int n_max(1 + (long)(rng() % 3));
        auto [pv, rec] = littlewood_witness_search(y, R, n_max);
        REQUIRE(pv.exact.has_value());
        // oracle: min over n of n * min |N| over the slice grid, computed
        // straight from the unreduced translation n*c
        std::optional<Rat> best;
        for (Int n = 1; n <= std::min(n_max, R.floor()); ++n) {
            std::vector<Rat> nc(d);
            for (int j = 0; j < d; ++j) nc[j] = Rat(n) * y.coords_as_rats()[j];
            for (const auto& [mi, w] : brute_points(B, nc, R)) {
                Rat v = Rat(n) * abs_product(w);
                if (!best || v < *best) best = v;
            }
        }
        REQUIRE(best.has_value());
        CHECK(*pv.exact == *best);
        CHECK(rec.n >= 1);
        CHECK(rec.n <= n_max);
    }
}

TEST_CASE("witness search finds the exact zero at the first integral multiple") {
    // y = Z^2 + (1/3, 2/5): the product vanishes as soon as one coordinate
    // of n*(1/3, 2/5) is integral, first at n = 3
    Grid y = rational_grid(RatMat::identity(2), {Rat(1, 3), Rat(2, 5)});
    auto [pv, rec] = littlewood_witness_search(y, Rat(20), Int(20));
    REQUIRE(pv.exact.has_value());
    CHECK(pv.exact->is_zero());
    CHECK(rec.n == 3);
    // below that multiple the minimum stays strictly positive
    auto [pv2, rec2] = littlewood_witness_search(y, Rat(20), Int(2));
    CHECK(pv2.exact->sign() > 0);
}

TEST_CASE("witness search is monotone in R and n_max") {
    Grid y = rational_grid(random_nonsingular(2), {Rat(1, 7), Rat(3, 8)});
    auto [a, ra] = littlewood_witness_search(y, Rat(3), Int(2));
    auto [b, rb] = littlewood_witness_search(y, Rat(6), Int(2));
    auto [c, rc] = littlewood_witness_search(y, Rat(6), Int(6));
    CHECK(*b.exact <= *a.exact);
    CHECK(*c.exact <= *b.exact);
}

TEST_CASE("shortest vector matches brute force on random rational lattices") {
    for (int trial = 0; trial < 15; ++trial) {
        int d = 2 + (int)(rng() % 2);
        RatMat B = random_nonsingular(d, 2);
        Lattice x = Lattice::from_rational(B);
        auto sv = shortest_vector(x);
        REQUIRE(sv.norm.is_point());
        // oracle: enumerate coefficients in a box certified to contain a
        // minimizer (radius = shortest column norm)
        Rat bound(0);
        for (int j = 0; j < d; ++j) {
            Rat n(0);
            for (int i = 0; i < d; ++i) n = std::max(n, B(i, j).abs());
            if (j == 0 || n < bound) bound = n;
        }
        std::optional<Rat> best;
        for (const auto& [mi, w] : brute_points(B, std::vector<Rat>(d, Rat(0)), bound)) {
            bool zero = true;
            Rat n(0);
            for (const Rat& x : w) {
                if (!x.is_zero()) zero = false;
                n = std::max(n, x.abs());
            }
            if (zero) continue;
            if (!best || n < *best) best = n;
        }
        REQUIRE(best.has_value());
        CHECK(sv.norm.lo() == *best);
        // the returned vector achieves the norm and matches its coefficients
        Rat vn(0);
        for (const Scalar& s : sv.vector) vn = std::max(vn, s.rational_value()->abs());
        CHECK(vn == *best);
        std::vector<Rat> mc(d);
        for (int j = 0; j < d; ++j) mc[j] = Rat(sv.coeffs[j]);
        std::vector<Rat> w = B * mc;
        for (int i = 0; i < d; ++i) CHECK(w[i] == *sv.vector[i].rational_value());
    }
}

TEST_CASE("lll_reduce preserves the lattice and certifies unimodularity") {
    for (int trial = 0; trial < 10; ++trial) {
        RatMat B = random_nonsingular(3, 8);
        Lattice x = Lattice::from_rational(B);
        Lattice red = lll_reduce(x);
        CHECK(same_column_lattice(B, red.rational_basis()));
        CHECK(*red.covol_sq() == *x.covol_sq());
    }
}

TEST_CASE("direct sum is block diagonal and multiplies covolumes") {
    Lattice a = Lattice::standard(2);
    Lattice b = Lattice::standard(3);
    Lattice s = direct_sum(a, b);
    REQUIRE(s.dim() == 5);
    CHECK(det(s.rational_basis()).abs() == Rat(1));
    CHECK(s.is_unimodular());
    RatMat two = RatMat::identity(2);
    two(0, 0) = Rat(2);
    CHECK_THROWS(direct_sum(Lattice::from_rational(two), b));
}

TEST_CASE("covolume certificate and unimodularity checks") {
    Lattice z2 = Lattice::standard(2);
    CHECK(z2.is_unimodular());
    Interval cov = z2.covolume_certificate();
    CHECK(cov.contains(Rat(1)));
    RatMat skew(2, 2);
    skew(0, 0) = Rat(2);
    skew(0, 1) = Rat(1);
    skew(1, 1) = Rat(1, 2);
    Lattice l = Lattice::from_rational(skew);
    CHECK(l.is_unimodular());  // det = 1 exactly
    CHECK(l.certified_nonsingular());
}

TEST_CASE("algebraic-basis lattice: certified shortest vector") {
    // basis columns (1, 0), (sqrt2, 1): shortest nonzero vector has norm
    // sqrt2 - 1 (from the combination col2 - col1)
    auto roots = AlgebraicReal::isolate_real_roots(IntPoly({-2, 0, 1}));
    auto sqrt2 = std::make_shared<AlgebraicReal>(roots[1]);
    ScalarMat b(2, 2, Scalar(Rat(0)));
    b(0, 0) = Scalar(Rat(1));
    b(0, 1) = Scalar::root_value(sqrt2);
    b(1, 1) = Scalar(Rat(1));
    Lattice x(b);
    auto [norm, vec, coeffs] = shortest_vector(x, Rat(1, 1 << 16));
    // sqrt2 - 1 = 0.41421...; the second coordinate is 1, so the sup-norm
    // of (sqrt2 - 1, 1) is 1; candidate (1, 0) also has norm 1
    CHECK(norm.contains(Rat(1)));
    CHECK(norm.width() <= Rat(1, 1 << 16));
}
