#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "glc/lattice.hpp"

namespace glc {

// Numerical probes (box dimension, topological entropy, the classical
// two-dimensional product scan, torus sampling). Everything in this header is
// an ESTIMATE: outputs are floating point, live outside the certified path,
// and are never consumed by the exact modules. The one exception is
// classical_littlewood_scan, which stays exact for rational inputs and
// returns certified interval enclosures for algebraic ones.

using EstPoint = std::vector<double>;
using DistanceFn = std::function<double(const EstPoint&, const EstPoint&)>;
using StepFn = std::function<EstPoint(const EstPoint&)>;

struct PointCloud {
    std::vector<EstPoint> points;
    DistanceFn distance;
    std::vector<std::string> labels;  // optional; parallel to points when present
};

inline void validate_cloud(const PointCloud& cloud) {
    if (!cloud.distance) throw std::invalid_argument("point cloud: missing distance oracle");
    if (!cloud.labels.empty() && cloud.labels.size() != cloud.points.size())
        throw std::invalid_argument("point cloud: labels do not match points");
    // spot-check the metric axioms on a few pairs
    size_t n = cloud.points.size();
    for (size_t i = 0; i < std::min<size_t>(n, 4); ++i) {
        if (cloud.distance(cloud.points[i], cloud.points[i]) != 0.0)
            throw std::invalid_argument("point cloud: nonzero self-distance");
        size_t j = (i + 1) % n;
        double dij = cloud.distance(cloud.points[i], cloud.points[j]);
        double dji = cloud.distance(cloud.points[j], cloud.points[i]);
        if (dij < 0 || dij != dji)
            throw std::invalid_argument("point cloud: distance not symmetric nonnegative");
    }
}

namespace detail {

// Deterministic insertion order: lexicographic by coordinates, index tiebreak.
inline std::vector<size_t> sorted_order(const std::vector<EstPoint>& pts) {
    std::vector<size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (pts[a] != pts[b]) return pts[a] < pts[b];
        return a < b;
    });
    return idx;
}

// Greedy maximal eps-separated subset over a fixed insertion order. The
// result is simultaneously an eps-cover by open balls (maximality), so one
// pass yields both the packing count S_eps and a valid covering count N_eps.
// For eps' <= eps/2 the triangle inequality forces S(eps) <= S(eps'), which
// is exactly the sandwich N_eps <= S_eps <= N_{eps/2}.
template <class Dist>
long greedy_separated(const std::vector<size_t>& order, Dist&& dist, double eps) {
    std::vector<size_t> chosen;
    for (size_t p : order) {
        bool ok = true;
        // scan most recent first: in sorted order the blocking point is near
        for (auto it = chosen.rbegin(); it != chosen.rend(); ++it)
            if (dist(p, *it) < eps) {
                ok = false;
                break;
            }
        if (ok) chosen.push_back(p);
    }
    return (long)chosen.size();
}

}  // namespace detail

/// Size of a greedy maximal eps-separated subset (deterministic order).
inline long separated_count(const PointCloud& cloud, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("separated_count: eps must be positive");
    validate_cloud(cloud);
    std::vector<size_t> order = detail::sorted_order(cloud.points);
    return detail::greedy_separated(
        order, [&](size_t a, size_t b) { return cloud.distance(cloud.points[a], cloud.points[b]); },
        eps);
}

struct SeparationRow {
    double eps;
    long separated;  // S_eps
    long cover;      // N_eps (the same maximal set, read as an open-ball cover)
};

struct SeparationCurve {
    std::vector<SeparationRow> rows;  // eps strictly decreasing
};

inline SeparationCurve build_separation_curve(const PointCloud& cloud,
                                              std::vector<double> eps_list) {
    std::sort(eps_list.begin(), eps_list.end(), std::greater<double>());
    eps_list.erase(std::unique(eps_list.begin(), eps_list.end()), eps_list.end());
    SeparationCurve curve;
    for (double eps : eps_list) {
        long s = separated_count(cloud, eps);
        curve.rows.push_back({eps, s, s});
    }
    return curve;
}

struct DimensionEstimate {
    double value = 0;
    double band = 0;  // standard error of the fitted slope
    bool degenerate = false;
    int rows_used = 0;
};

namespace detail {

struct SlopeFit {
    double slope = 0, band = 0;
};

inline SlopeFit least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    size_t n = xs.size();
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / (double)n;
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / (double)n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    SlopeFit fit;
    if (sxx == 0) return fit;
    fit.slope = sxy / sxx;
    if (n > 2) {
        double ss = 0;
        for (size_t i = 0; i < n; ++i) {
            double r = ys[i] - my - fit.slope * (xs[i] - mx);
            ss += r * r;
        }
        fit.band = std::sqrt(ss / (double)(n - 2) / sxx);
    }
    return fit;
}

}  // namespace detail

/// Least-squares slope of log S_eps against |log eps| over a tail window.
/// The window drops the largest-eps and smallest-eps rows by the given
/// fractions (boundary and saturation effects).
inline DimensionEstimate box_dimension_estimate(const SeparationCurve& curve,
                                                double drop_large_frac = 0.25,
                                                double drop_small_frac = 0.10) {
    size_t n = curve.rows.size();
    if (n < 4) throw std::invalid_argument("box_dimension_estimate: need at least 4 rows");
    size_t drop_front = (size_t)((double)n * drop_large_frac);
    size_t drop_back = (size_t)((double)n * drop_small_frac);
    if (drop_front + drop_back + 2 > n)
        throw std::invalid_argument("box_dimension_estimate: fit window too small");
    std::vector<double> xs, ys;
    for (size_t i = drop_front; i < n - drop_back; ++i) {
        const SeparationRow& r = curve.rows[i];
        if (r.separated <= 0) throw std::invalid_argument("box_dimension_estimate: empty row");
        xs.push_back(std::fabs(std::log(r.eps)));
        ys.push_back(std::log((double)r.separated));
    }
    DimensionEstimate est;
    est.rows_used = (int)xs.size();
    bool constant = std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); });
    if (constant) {
        est.degenerate = true;
        return est;
    }
    detail::SlopeFit fit = detail::least_squares_slope(xs, ys);
    est.value = fit.slope;
    est.band = fit.band;
    return est;
}

struct EntropyEstimate {
    double value = 0;
    double eps_used = 0;
    bool exited_region = false;  // some trajectory left the sampled region
    std::vector<std::pair<double, double>> per_eps;  // (eps, slope)
};

/// Slope of log S_{n,eps} against n in the Bowen metric
/// d_n(x,y) = max_{0<=i<=n} d(f^i x, f^i y), maximized over the eps list.
inline EntropyEstimate entropy_estimate(const StepFn& step, const PointCloud& cloud, int n_max,
                                        const std::vector<double>& eps_list,
                                        const std::function<bool(const EstPoint&)>& in_region =
                                            nullptr) {
    if (!step) throw std::invalid_argument("entropy_estimate: missing step map");
    if (n_max < 1) throw std::invalid_argument("entropy_estimate: need n_max >= 1");
    if (eps_list.empty()) throw std::invalid_argument("entropy_estimate: empty eps list");
    validate_cloud(cloud);
    size_t p = cloud.points.size();
    std::vector<std::vector<EstPoint>> orbit(p);
    EntropyEstimate est;
    for (size_t i = 0; i < p; ++i) {
        orbit[i].reserve((size_t)n_max + 1);
        orbit[i].push_back(cloud.points[i]);
        for (int k = 0; k < n_max; ++k) {
            orbit[i].push_back(step(orbit[i].back()));
            if (in_region && !in_region(orbit[i].back())) est.exited_region = true;
        }
    }
    std::vector<size_t> order = detail::sorted_order(cloud.points);
    for (double eps : eps_list) {
        if (!(eps > 0)) throw std::invalid_argument("entropy_estimate: eps must be positive");
        std::vector<double> ns, logs;
        for (int n = 0; n <= n_max; ++n) {
            auto bowen = [&](size_t a, size_t b) {
                double m = 0;
                for (int i = 0; i <= n; ++i)
                    m = std::max(m, cloud.distance(orbit[a][(size_t)i], orbit[b][(size_t)i]));
                return m;
            };
            long s = detail::greedy_separated(order, bowen, eps);
            ns.push_back((double)n);
            logs.push_back(std::log((double)std::max<long>(s, 1)));
        }
        double slope = detail::least_squares_slope(ns, logs).slope;
        est.per_eps.emplace_back(eps, slope);
        if (est.per_eps.size() == 1 || slope > est.value) {
            est.value = slope;
            est.eps_used = eps;
        }
    }
    return est;
}

struct ScanRecord {
    Int n;
    std::optional<Rat> exact;  // set when alpha, beta are rational
    Interval value;            // always a valid enclosure of n<na><nb>
    bool is_record = false;    // strict running minimum
    bool decided = true;       // false when the enclosure stalls at the width goal
};

namespace detail {

// distance from a rational to the nearest integer
inline Rat int_dist(const Rat& q) { return (q - Rat(q.round_nearest())).abs(); }

// enclosure of gamma |-> dist(gamma, Z) over an interval; the map is
// 1-Lipschitz, piecewise linear with minima at integers and maxima at
// half-integers, so endpoint values plus the two lattice tests are exact
inline Interval int_dist_interval(const Interval& g) {
    Rat lo_d = int_dist(g.lo()), hi_d = int_dist(g.hi());
    Rat lo = std::min(lo_d, hi_d), hi = std::max(lo_d, hi_d);
    if (g.lo().ceil() <= g.hi().floor()) lo = Rat(0);                          // integer inside
    Rat half(1, 2);
    if ((g.lo() - half).ceil() <= (g.hi() - half).floor()) hi = half;          // half-integer inside
    return Interval(lo, hi);
}

}  // namespace detail

/// Running minima of n<na><nb> for n = 1..n_max, where <.> is the distance
/// to the nearest integer. Exact for rational inputs; certified interval
/// enclosures (precision escalated down to `width_floor`) otherwise.
inline std::vector<ScanRecord> classical_littlewood_scan(
    const Scalar& alpha, const Scalar& beta, long n_max,
    const Rat& width_floor = Rat::pow(Rat(2), -256)) {
    if (n_max < 1) throw std::invalid_argument("classical_littlewood_scan: need n_max >= 1");
    std::vector<ScanRecord> rows;
    rows.reserve((size_t)n_max);
    bool rational = alpha.is_rational() && beta.is_rational();
    std::optional<Rat> best_exact;
    std::optional<Rat> best_hi;
    for (long n = 1; n <= n_max; ++n) {
        ScanRecord row;
        row.n = Int(n);
        if (rational) {
            Rat v = Rat(n) * detail::int_dist(Rat(n) * *alpha.rational_value()) *
                    detail::int_dist(Rat(n) * *beta.rational_value());
            row.exact = v;
            row.value = Interval(v);
            row.is_record = !best_exact || v < *best_exact;
            if (row.is_record) best_exact = v;
        } else {
            Scalar na = Rat(n) * alpha, nb = Rat(n) * beta;
            Rat width = Rat(1, 1 << 30);
            Interval v;
            for (;;) {
                Interval da = na.is_rational() ? Interval(detail::int_dist(*na.rational_value()))
                                               : detail::int_dist_interval(na.approx(width));
                Interval db = nb.is_rational() ? Interval(detail::int_dist(*nb.rational_value()))
                                               : detail::int_dist_interval(nb.approx(width));
                v = Interval(Rat(n)) * da * db;
                // a record decision needs the enclosure clear of the best bound
                bool ambiguous = best_hi && v.lo() < *best_hi && !(v.hi() < *best_hi);
                if (!ambiguous || width <= width_floor) {
                    row.decided = !ambiguous;
                    break;
                }
                width = width * width;
                if (width < width_floor) width = width_floor;
            }
            row.value = v;
            row.is_record = !best_hi || v.hi() < *best_hi;
            if (row.is_record) best_hi = v.hi();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Sup-norm distance on the d-torus in lattice coordinates.
inline double torus_sup_distance(const EstPoint& a, const EstPoint& b) {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double f = std::fabs(a[i] - b[i]);
        f -= std::floor(f);
        m = std::max(m, std::min(f, 1.0 - f));
    }
    return m;
}

/// Samples translations on a uniform torus grid over the fibers of `x` and
/// keeps those whose best product bound from littlewood_witness_search at
/// (R, n_max) stays at or above `threshold` — the grids the search budget
/// fails to certify as small. The survivors form a cloud under the torus
/// metric, ready for dimension estimation.
inline PointCloud exception_sampler(const Lattice& x, long resolution, const Rat& R,
                                    const Int& n_max, const Rat& threshold) {
    if (resolution < 1) throw std::invalid_argument("exception_sampler: resolution must be >= 1");
    if (!x.is_unimodular()) throw std::invalid_argument("exception_sampler: lattice not unimodular");
    int d = x.dim();
    PointCloud cloud;
    cloud.distance = torus_sup_distance;
    std::vector<long> idx(d, 0);
    for (;;) {
        ScalarVec coords;
        EstPoint pt;
        for (int j = 0; j < d; ++j) {
            coords.emplace_back(Rat(idx[j], resolution));
            pt.push_back((double)idx[j] / (double)resolution);
        }
        Grid y(x, std::move(coords));
        auto [bound, rec] = littlewood_witness_search(y, R, n_max);
        (void)rec;
        if (!(bound.upper_abs() < threshold)) {
            cloud.points.push_back(std::move(pt));
            cloud.labels.push_back(bound.upper_abs().str());
        }
        int j = 0;
        while (j < d && ++idx[j] == resolution) idx[j++] = 0;
        if (j == d) break;
    }
    return cloud;
}

}  // namespace glc
