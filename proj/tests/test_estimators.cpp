#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <set>

#include "glc/estimators.hpp"
#include "glc/numberfield.hpp"

using namespace glc;

namespace {

std::mt19937 rng(4242);

double euclid(const EstPoint& a, const EstPoint& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double sup_dist(const EstPoint& a, const EstPoint& b) {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

PointCloud line_cloud(std::vector<double> xs) {
    PointCloud c;
    for (double x : xs) c.points.push_back({x});
    c.distance = euclid;
    return c;
}

// depth-10 middle-thirds construction: left endpoints of the 2^10 intervals
PointCloud cantor_cloud() {
    PointCloud c;
    for (int mask = 0; mask < 1024; ++mask) {
        double x = 0;
        for (int i = 0; i < 10; ++i)
            if (mask & (1 << i)) x += 2.0 * std::pow(3.0, -(i + 1));
        c.points.push_back({x});
    }
    c.distance = euclid;
    return c;
}

// maximum independent set in the eps-conflict graph of sorted 1d points
long line_packing_oracle(std::vector<double> xs, double eps) {
    std::sort(xs.begin(), xs.end());
    size_t n = xs.size();
    std::vector<long> f(n + 1, 0);
    for (size_t i = 1; i <= n; ++i) {
        size_t j = 0;  // points xs[0..j-1] are compatible with xs[i-1]
        while (j < i - 1 && xs[i - 1] - xs[j] >= eps) ++j;
        f[i] = std::max(f[i - 1], 1 + f[j]);
    }
    return f[n];
}

}  // namespace

TEST_CASE("separated count on collinear points") {
    PointCloud c = line_cloud({0, 1, 2});
    CHECK(separated_count(c, 1.0) == 3);
    CHECK(separated_count(c, 1.5) == 2);
    CHECK(separated_count(c, 2.5) == 1);
    CHECK_THROWS_AS(separated_count(c, 0.0), std::invalid_argument);
    PointCloud broken = c;
    broken.distance = nullptr;
    CHECK_THROWS_AS(separated_count(broken, 1.0), std::invalid_argument);
}

TEST_CASE("separated count matches the line packing oracle") {
    // uniform grid: greedy is exactly optimal
    std::vector<double> grid;
    for (int i = 0; i < 1000; ++i) grid.push_back(i / 999.0);
    CHECK(separated_count(line_cloud(grid), 0.1) == line_packing_oracle(grid, 0.1));
    // random 1d clouds
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> xs;
        for (int i = 0; i < 60; ++i) xs.push_back(u(rng));
        double eps = 0.02 + 0.2 * u(rng);
        CHECK(separated_count(line_cloud(xs), eps) == line_packing_oracle(xs, eps));
    }
}

TEST_CASE("greedy separated sets are monotone and maximal") {
    std::uniform_real_distribution<double> u(0, 1);
    PointCloud c;
    for (int i = 0; i < 120; ++i) c.points.push_back({u(rng), u(rng)});
    c.distance = euclid;
    long prev = -1;
    for (double eps : {0.4, 0.2, 0.1, 0.05, 0.025}) {
        long s = separated_count(c, eps);
        if (prev >= 0) CHECK(s >= prev);  // eps halves each step
        prev = s;
    }
}

TEST_CASE("separation curve rows satisfy the packing/covering sandwich") {
    std::uniform_real_distribution<double> u(0, 1);
    PointCloud c;
    for (int i = 0; i < 150; ++i) c.points.push_back({u(rng), u(rng)});
    c.distance = euclid;
    SeparationCurve curve = build_separation_curve(c, {0.5, 0.25, 0.125, 0.0625, 0.03125});
    REQUIRE(curve.rows.size() == 5);
    for (size_t i = 0; i < curve.rows.size(); ++i) {
        CHECK(curve.rows[i].cover <= curve.rows[i].separated);
        if (i + 1 < curve.rows.size()) {
            CHECK(curve.rows[i + 1].eps == curve.rows[i].eps / 2);
            CHECK(curve.rows[i].separated <= curve.rows[i + 1].cover);
        }
    }
}

TEST_CASE("cantor fixture: exact counts and dimension estimate") {
    PointCloud c = cantor_cloud();
    std::vector<double> eps;
    // shrink each scale just below 3^-k: far enough to keep one point per
    // depth-k interval, close enough not to bend the log-log fit
    for (int k = 2; k <= 10; ++k) eps.push_back((k <= 3 ? 0.9999 : 0.999) * std::pow(3.0, -k));
    SeparationCurve curve = build_separation_curve(c, eps);
    for (int k = 2; k <= 10; ++k) CHECK(curve.rows[k - 2].separated == (1L << k));
    DimensionEstimate est = box_dimension_estimate(curve);
    CHECK_FALSE(est.degenerate);
    CHECK(std::fabs(est.value - std::log(2.0) / std::log(3.0)) <= 0.05);
}

TEST_CASE("unit square fixture: dimension near 2") {
    PointCloud c;
    for (int i = 0; i < 256; ++i)
        for (int j = 0; j < 256; ++j) c.points.push_back({i / 256.0, j / 256.0});
    c.distance = sup_dist;
    SeparationCurve curve =
        build_separation_curve(c, {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64});
    // greedy picks an exact subgrid on this fixture
    long expected[] = {16, 64, 256, 1024, 4096};
    for (size_t i = 0; i < 5; ++i) CHECK(curve.rows[i].separated == expected[i]);
    DimensionEstimate est = box_dimension_estimate(curve);
    CHECK(std::fabs(est.value - 2.0) <= 0.15);
}

TEST_CASE("degenerate curves are flagged") {
    PointCloud single = line_cloud({0.5});
    SeparationCurve curve = build_separation_curve(single, {0.5, 0.25, 0.125, 0.0625});
    DimensionEstimate est = box_dimension_estimate(curve);
    CHECK(est.degenerate);
    CHECK(est.value == 0.0);
    CHECK_THROWS_AS(box_dimension_estimate(SeparationCurve{}), std::invalid_argument);
}

TEST_CASE("dimension estimate is stable under a bi-lipschitz distortion") {
    PointCloud base = cantor_cloud();
    PointCloud warped = base;
    // concave increasing distortion with d <= d' <= 2d keeps the metric axioms
    warped.distance = [](const EstPoint& a, const EstPoint& b) {
        double d = euclid(a, b);
        return d + std::min(d, 0.01);
    };
    std::vector<double> eps;
    for (int k = 2; k <= 10; ++k) eps.push_back((k <= 3 ? 0.9999 : 0.999) * std::pow(3.0, -k));
    DimensionEstimate da = box_dimension_estimate(build_separation_curve(base, eps));
    DimensionEstimate db = box_dimension_estimate(build_separation_curve(warped, eps));
    CHECK(std::fabs(da.value - db.value) <= 0.1 + da.band + db.band);
}

TEST_CASE("entropy of the identity map is zero") {
    std::uniform_real_distribution<double> u(0, 1);
    PointCloud c;
    for (int i = 0; i < 200; ++i) c.points.push_back({u(rng)});
    c.distance = euclid;
    EntropyEstimate est =
        entropy_estimate([](const EstPoint& p) { return p; }, c, 6, {0.1, 0.05});
    CHECK(est.value == 0.0);
    CHECK_FALSE(est.exited_region);
    CHECK_THROWS_AS(entropy_estimate(nullptr, c, 6, {0.1}), std::invalid_argument);
    PointCloud broken = c;
    broken.distance = nullptr;
    CHECK_THROWS_AS(
        entropy_estimate([](const EstPoint& p) { return p; }, broken, 6, {0.1}),
        std::invalid_argument);
}

TEST_CASE("entropy of the doubling map is near log 2") {
    PointCloud c;
    for (int i = 0; i < (1 << 14); ++i) c.points.push_back({i / 16384.0});
    c.distance = torus_sup_distance;
    auto doubling = [](const EstPoint& p) {
        double x = 2 * p[0];
        return EstPoint{x - std::floor(x)};
    };
    EntropyEstimate est = entropy_estimate(doubling, c, 6, {1.0 / 16});
    CHECK(std::fabs(est.value - std::log(2.0)) <= 0.1);
    CHECK(est.eps_used == 1.0 / 16);
}

TEST_CASE("entropy of an irrational rotation is near zero") {
    PointCloud c;
    for (int i = 0; i < (1 << 12); ++i) c.points.push_back({i / 4096.0});
    c.distance = torus_sup_distance;
    double theta = std::sqrt(2.0) - 1.0;
    auto rot = [theta](const EstPoint& p) {
        double x = p[0] + theta;
        return EstPoint{x - std::floor(x)};
    };
    EntropyEstimate est = entropy_estimate(rot, c, 6, {0.06});
    CHECK(std::fabs(est.value) <= 0.02);
}

TEST_CASE("trajectories leaving the region are flagged") {
    PointCloud c = line_cloud({0.1, 0.5, 0.9});
    auto drift = [](const EstPoint& p) { return EstPoint{p[0] + 0.4}; };
    auto inside = [](const EstPoint& p) { return p[0] >= 0.0 && p[0] <= 1.0; };
    EntropyEstimate est = entropy_estimate(drift, c, 4, {0.1}, inside);
    CHECK(est.exited_region);
}

TEST_CASE("classical scan: rational inputs are exact") {
    auto rows = classical_littlewood_scan(Scalar(Rat(1, 2)), Scalar(Rat(1, 2)), 4);
    REQUIRE(rows.size() == 4);
    CHECK(*rows[0].exact == Rat(1, 4));  // 1 * <1/2> * <1/2>
    CHECK(*rows[1].exact == Rat(0));
    CHECK(rows[1].is_record);
    CHECK(*rows[2].exact == Rat(3, 4));
    CHECK_FALSE(rows[2].is_record);
    CHECK_FALSE(rows[3].is_record);  // zero again, but not strictly smaller
    // record values strictly decrease
    Rat last(-1);
    for (const ScanRecord& r : rows)
        if (r.is_record) {
            if (last >= Rat(0)) CHECK(*r.exact < last);
            last = *r.exact;
        }
}

TEST_CASE("classical scan hits zero at the torsion order of each coordinate") {
    for (int trial = 0; trial < 20; ++trial) {
        long pa = (long)(rng() % 9), qa = 2 + (long)(rng() % 8);
        long pb = (long)(rng() % 9), qb = 2 + (long)(rng() % 8);
        Rat a(pa, qa), b(pb, qb);
        long da = (long)a.den().get_si(), db = (long)b.den().get_si();
        long n0 = std::min(da, db);  // first n with <na> or <nb> integral
        long lcm = da / std::gcd(da, db) * db;
        auto rows = classical_littlewood_scan(Scalar(a), Scalar(b), lcm);
        for (long n = 1; n < n0; ++n) CHECK(*rows[n - 1].exact > Rat(0));
        CHECK(*rows[n0 - 1].exact == Rat(0));
        // the grid's torsion order also gives exactly zero — cross-module check
        Grid y(Lattice::standard(2), {Scalar(a), Scalar(b)});
        FLCertificate cert = rational_grid_fl_certificate(y);
        CHECK(cert.n == lcm);
        CHECK(*rows[lcm - 1].exact == Rat(0));
    }
}

TEST_CASE("classical scan: golden ratio records follow the fibonacci numbers") {
    auto roots = AlgebraicReal::isolate_real_roots(IntPoly({-1, -1, 1}));
    REQUIRE(roots.size() == 2);
    auto phi = std::make_shared<AlgebraicReal>(roots[1]);
    Scalar g = Scalar::root_value(phi);
    auto rows = classical_littlewood_scan(g, g, 150);
    std::set<long> fib{1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144};
    std::set<long> records;
    Rat last_hi(-1);
    for (const ScanRecord& r : rows) {
        CHECK(r.decided);
        CHECK(r.value.lo().sign() >= 0);
        if (r.is_record) {
            records.insert((long)r.n.get_si());
            if (last_hi >= Rat(0)) CHECK(r.value.hi() < last_hi);
            last_hi = r.value.hi();
        }
        // enclosure agrees with a floating-point evaluation up to its width
        double x = (double)r.n.get_si() * 1.6180339887498949;
        double v = (double)r.n.get_si() * std::pow(std::fabs(x - std::round(x)), 2);
        CHECK(std::fabs(r.value.mid().to_double() - v) <=
              1e-9 + r.value.width().to_double());
    }
    CHECK(records == fib);
    CHECK(last_hi < Rat(2, 1000));  // c/n decay down to n = 144
}

TEST_CASE("classical scan: sqrt2 with sqrt3 never vanishes but records shrink") {
    auto r2 = AlgebraicReal::isolate_real_roots(IntPoly({-2, 0, 1}));
    auto r3 = AlgebraicReal::isolate_real_roots(IntPoly({-3, 0, 1}));
    Scalar a = Scalar::root_value(std::make_shared<AlgebraicReal>(r2[1]));
    Scalar b = Scalar::root_value(std::make_shared<AlgebraicReal>(r3[1]));
    auto rows = classical_littlewood_scan(a, b, 100);
    Rat best(-1);
    for (const ScanRecord& r : rows) {
        CHECK(r.value.lo().sign() > 0);  // algebraic independence keeps it positive
        if (r.is_record) best = r.value.hi();
    }
    CHECK(best < Rat(1, 100));
}

TEST_CASE("exception sampler excludes rational grids certified to zero") {
    // every sample point has denominator <= 4, so the budget reaches the zero
    Lattice z2 = Lattice::standard(2);
    PointCloud cloud = exception_sampler(z2, 4, Rat(5), Int(4), Rat(1, 1000000));
    CHECK(cloud.points.empty());
    RatMat b = RatMat::identity(2);
    b(0, 0) = Rat(2);
    CHECK_THROWS_AS(exception_sampler(Lattice::from_rational(b), 2, Rat(3), Int(2), Rat(1, 10)),
                    std::invalid_argument);
}

TEST_CASE("exception sampler keeps grids the budget cannot certify") {
    // denominator-5 points need n = 5 to vanish; a budget of n_max = 3 keeps
    // exactly those with both coordinates nonzero
    Lattice z2 = Lattice::standard(2);
    PointCloud cloud = exception_sampler(z2, 5, Rat(4), Int(3), Rat(1, 25));
    REQUIRE(cloud.points.size() == 16);
    REQUIRE(cloud.labels.size() == 16);
    for (const EstPoint& p : cloud.points) {
        CHECK(p[0] > 0);
        CHECK(p[1] > 0);
    }
    // the survivors form a usable cloud for the dimension pipeline
    validate_cloud(cloud);
    CHECK(separated_count(cloud, 0.15) >= 4);
    CHECK(separated_count(cloud, 0.15) <= 16);
}
