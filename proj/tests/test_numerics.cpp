#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "glc/algebraic.hpp"
#include "glc/interval.hpp"
#include "glc/polynomial.hpp"
#include "glc/rational.hpp"
#include "glc/scalar.hpp"

using namespace glc;

TEST_CASE("rationals are canonical and exact") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(1, -2) == Rat(-1, 2));
    CHECK(Rat(-1, 2).den() == 2);
    CHECK((Rat(1, 3) + Rat(1, 6)) == Rat(1, 2));
    CHECK((Rat(1, 3) * Rat(3, 7)) == Rat(1, 7));
    CHECK_THROWS(Rat(1, 0));
    CHECK_THROWS(Rat(1) / Rat(0));
    CHECK(Rat(7, 2).floor() == 3);
    CHECK(Rat(-7, 2).floor() == -4);
    CHECK(Rat(7, 2).ceil() == 4);
    CHECK(Rat(5, 3).round_nearest() == 2);
    CHECK(Rat(1, 2).round_nearest() == 0);  // ties go down
    CHECK(Rat::pow(Rat(2, 3), 3) == Rat(8, 27));
    CHECK(Rat::pow(Rat(2), -2) == Rat(1, 4));
}

TEST_CASE("rational serialization round-trips") {
    CHECK(Rat(-3, 7).str() == "-3/7");
    CHECK(Rat(5).str() == "5");
    CHECK(Rat::parse("-3/7") == Rat(-3, 7));
    CHECK(Rat::parse("42") == Rat(42));
    CHECK(Rat::parse("6/4") == Rat(3, 2));
    CHECK_THROWS(Rat::parse("abc"));
}

TEST_CASE("interval arithmetic is outward-conservative") {
    Interval a(Rat(1), Rat(2)), b(Rat(3), Rat(4));
    CHECK((a * b).lo() == 3);
    CHECK((a * b).hi() == 8);
    Interval c(Rat(-1), Rat(1));
    CHECK((c + c).lo() == -2);
    CHECK((c + c).hi() == 2);
    CHECK_THROWS(a / c);
    CHECK((Interval(Rat(1)) / Interval(Rat(4))).is_point());

    // rational expression trees stay inside interval evaluations
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto rnd = [&] { return Rat((int)(rng() % 41) - 20, (int)(rng() % 9) + 1); };
        Rat x = rnd(), y = rnd(), z = rnd();
        Rat exact = (x * y + z) * (x - y) + z * z;
        Interval ix(x - Rat(1, 100), x + Rat(1, 100));
        Interval iy(y - Rat(1, 100), y + Rat(1, 100));
        Interval iz(z - Rat(1, 100), z + Rat(1, 100));
        Interval iv = (ix * iy + iz) * (ix - iy) + iz * iz;
        CHECK(iv.contains(exact));
    }
}

TEST_CASE("interval sign and outward rounding") {
    CHECK(Interval(Rat(1, 3), Rat(1, 2)).sign() == Sign::Positive);
    CHECK(Interval(Rat(-2), Rat(-1)).sign() == Sign::Negative);
    CHECK(Interval(Rat(-1, 10), Rat(1, 10)).sign() == Sign::Unknown);
    Interval t(Rat(1, 3), Rat(2, 3));
    Interval r = t.round_outward(8);
    CHECK(r.contains(t));
    CHECK(r.lo().den() <= 256);
    CHECK(r.hi().den() <= 256);
}

TEST_CASE("interval log is conservative") {
    // ln 2 = 0.69314718...
    Interval l2 = Interval::log(Interval(Rat(2)));
    CHECK(l2.lo().to_double() < 0.6931472);
    CHECK(l2.hi().to_double() > 0.6931471);
    CHECK(l2.width() < Rat(1, 1000000));
    // log is monotone: containment is preserved
    Interval x(Rat(3, 2), Rat(5, 2));
    Interval lx = Interval::log(x);
    CHECK(lx.contains(Interval::log(Interval(Rat(2)))));
    CHECK_THROWS(Interval::log(Interval(Rat(-1), Rat(1))));
    CHECK(Interval::log(Interval(Rat(1))).contains(Rat(0)));
}

TEST_CASE("polynomial basics") {
    IntPoly f({-2, 0, 1});  // x^2 - 2
    CHECK(f.degree() == 2);
    CHECK(f.eval(Rat(2)) == Rat(2));
    CHECK(f.derivative() == IntPoly({0, 2}));
    CHECK(is_squarefree(f));
    IntPoly sq({1, 2, 1});  // (x+1)^2
    CHECK_FALSE(is_squarefree(sq));
    CHECK(squarefree_part(sq) == IntPoly({1, 1}));
}

TEST_CASE("resultant has the textbook values") {
    // res(x^2 - 2, x^2 - 3) = (2 - 3)^2 = 1
    RatPoly a(IntPoly({-2, 0, 1})), b(IntPoly({-3, 0, 1}));
    CHECK(RatPoly::resultant(a, b) == Rat(1));
    // res(f, f') = (-1)^{d(d-1)/2} disc(f) for monic f; x^2-2: disc 8
    CHECK(RatPoly::resultant(a, RatPoly(IntPoly({0, 2}))) == Rat(-8));
    // shared root => 0
    RatPoly c(IntPoly({-2, 1}));  // x - 2
    RatPoly d = c * RatPoly(IntPoly({1, 1}));
    CHECK(RatPoly::resultant(c, d) == Rat(0));
    // norm identity: res(f(x), c - x)-style, norm(alpha - c) = (-1)^d f(c)
    RatPoly cubic(IntPoly({-1, -3, 0, 1}));  // x^3 - 3x - 1
    RatPoly xm2(IntPoly({-2, 1}));           // x - 2
    // resultant(f, g) = lc(f)^{deg g} prod g(roots of f)
    CHECK(RatPoly::resultant(cubic, xm2).abs() == Rat(1));
}

TEST_CASE("sturm root counting") {
    IntPoly cubic({-1, -3, 0, 1});  // x^3 - 3x - 1, three real roots
    SturmChain ch(cubic);
    CHECK(ch.count_roots(Rat(-10), Rat(10)) == 3);
    CHECK(ch.count_roots(Rat(-2), Rat(0)) == 2);
    CHECK(ch.count_roots(Rat(1), Rat(2)) == 1);
    IntPoly noreal({1, 0, 1});  // x^2 + 1
    SturmChain ch2(noreal);
    CHECK(ch2.count_roots(Rat(-10), Rat(10)) == 0);
}

TEST_CASE("root isolation: x^2 + 1 has no real roots") {
    CHECK(AlgebraicReal::isolate_real_roots(IntPoly({1, 0, 1})).empty());
}

TEST_CASE("root isolation: x^2 - 2") {
    auto roots = AlgebraicReal::isolate_real_roots(IntPoly({-2, 0, 1}));
    REQUIRE(roots.size() == 2);
    Interval neg = roots[0].refine_to(Rat(1, 1000));
    Interval pos = roots[1].refine_to(Rat(1, 1000));
    CHECK(neg.hi().to_double() == Catch::Approx(-1.41421).margin(1e-3));
    CHECK(pos.lo().to_double() == Catch::Approx(1.41421).margin(1e-3));
    // isolating intervals certified: opposite signs at endpoints
    for (const auto& r : roots) {
        if (r.is_rational()) continue;
        CHECK(r.minimal_polynomial().sign_at(r.interval().lo()) *
                  r.minimal_polynomial().sign_at(r.interval().hi()) <
              0);
    }
}

TEST_CASE("root isolation: the worked cubic x^3 - 3x - 1") {
    auto roots = AlgebraicReal::isolate_real_roots(IntPoly({-1, -3, 0, 1}));
    REQUIRE(roots.size() == 3);
    // verified via sign evaluation: f(-1.6) > 0 > f(-1.5), etc.
    double expected[3] = {-1.532089, -0.347296, 1.879385};
    for (int i = 0; i < 3; ++i) {
        Interval iv = roots[i].refine_to(Rat(1, 1000000));
        CHECK(iv.lo().to_double() == Catch::Approx(expected[i]).margin(1e-5));
    }
}

TEST_CASE("root isolation rejects non-squarefree input") {
    CHECK_THROWS_AS(AlgebraicReal::isolate_real_roots(IntPoly({1, 2, 1})),
                    std::invalid_argument);
}

TEST_CASE("refinement is idempotent and nested") {
    auto roots = AlgebraicReal::isolate_real_roots(IntPoly({-2, 0, 1}));
    const AlgebraicReal& r = roots[1];
    Interval w1 = r.refine_to(Rat(1, 100));
    Interval w2 = r.refine_to(Rat(1, 100000));
    CHECK(w1.contains(w2));
    CHECK(w2.width() <= Rat(1, 100000));
    Interval w3 = r.refine_to(Rat(1, 100));  // no widening on re-request
    CHECK(w2.contains(w3));
}

TEST_CASE("rational root collapses to a point") {
    AlgebraicReal three(IntPoly({-3, 1}), Interval(Rat(2), Rat(4)));
    three.refine_to(Rat(1, 1000));
    CHECK(three.is_rational());
    CHECK(*three.rational_value() == Rat(3));
}

TEST_CASE("exact sign of polynomials at algebraic points") {
    auto roots = AlgebraicReal::isolate_real_roots(IntPoly({-2, 0, 1}));
    const AlgebraicReal& sqrt2 = roots[1];
    // sqrt2^2 - 2 == 0, decided exactly
    CHECK(sqrt2.sign_of(RatPoly(IntPoly({-2, 0, 1}))) == 0);
    CHECK(sqrt2.sign_of(RatPoly(IntPoly({-1, 1}))) == 1);   // sqrt2 - 1 > 0
    CHECK(sqrt2.sign_of(RatPoly(IntPoly({-2, 1}))) == -1);  // sqrt2 - 2 < 0
    CHECK(sqrt2.sign() == Sign::Positive);
    CHECK(roots[0].sign() == Sign::Negative);
}

TEST_CASE("scalar affine arithmetic is exact") {
    auto r2 = std::make_shared<AlgebraicReal>(
        AlgebraicReal::isolate_real_roots(IntPoly({-2, 0, 1}))[1]);
    Scalar s = Scalar::root_value(r2);       // sqrt2
    Scalar t = s + Scalar(Rat(-1));          // sqrt2 - 1
    Scalar u = Rat(2) * t + Scalar(Rat(2));  // 2 sqrt2
    CHECK((u - s - s).is_zero());
    CHECK(t.sign() == Sign::Positive);
    CHECK((t - t).is_zero());
    // (sqrt2)^2 = 2 exactly through the same-root product
    Scalar sq = s * s;
    REQUIRE(sq.is_rational());
    CHECK(*sq.rational_value() == Rat(2));
    // (sqrt2 - 1)(sqrt2 + 1) = 1
    Scalar v = (s - Scalar(Rat(1))) * (s + Scalar(Rat(1)));
    CHECK(*v.rational_value() == Rat(1));
}

TEST_CASE("scalar products across distinct roots fall back to intervals") {
    auto r2 = std::make_shared<AlgebraicReal>(
        AlgebraicReal::isolate_real_roots(IntPoly({-2, 0, 1}))[1]);
    auto r3 = std::make_shared<AlgebraicReal>(
        AlgebraicReal::isolate_real_roots(IntPoly({-3, 0, 1}))[1]);
    Scalar a = Scalar::root_value(r2), b = Scalar::root_value(r3);
    CHECK_FALSE(Scalar::try_mul(a, b).has_value());
    Interval prod = Scalar::mul_interval(a, b, Rat(1, 1000000));
    CHECK(prod.contains(Rat(2449490, 1000000)) == (prod.lo().to_double() < 2.449490));
    CHECK(prod.lo().to_double() == Catch::Approx(2.4494897).margin(1e-4));
    // sum refines to arbitrary width
    Scalar sum = a + b;
    Interval iv = sum.approx(Rat(1, Int(1) << 80));
    CHECK(iv.width() <= Rat(1, Int(1) << 80));
    CHECK(iv.lo().to_double() == Catch::Approx(3.1462643).margin(1e-9));
}

TEST_CASE("refinement loop reports unknown at the floor, never guesses") {
    // the same sqrt2 through two unrelated root handles: the difference is
    // exactly zero, but no finite refinement can certify it
    auto r2a = std::make_shared<AlgebraicReal>(
        AlgebraicReal::isolate_real_roots(IntPoly({-2, 0, 1}))[1]);
    auto r2b = std::make_shared<AlgebraicReal>(
        AlgebraicReal::isolate_real_roots(IntPoly({-2, 0, 1}))[1]);
    Scalar z = Scalar::root_value(r2a) - Scalar::root_value(r2b);
    CHECK(z.sign(Rat(1, Int(1) << 64)) == Sign::Unknown);
}
