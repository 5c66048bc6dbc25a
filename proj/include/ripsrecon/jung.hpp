#pragma once

/**
 * Circumcenters, circumradii and Jung-type diameter bounds.
 *
 * A circumcenter of A is a minimiser of c -> max_a d(a, c); the circumradius
 * is the minimum. In Euclidean space the minimiser is unique (the smallest
 * enclosing ball). On a manifold it may not be unique; any minimiser found
 * to within the solver residual is accepted.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <list>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "manifold.hpp"
#include "metric.hpp"
#include "random.hpp"

namespace ripsrecon {

/// Diameter never falls below this multiple of the circumradius when diam < Delta.
inline constexpr double kCircumradiusFactor = 4.0 / 3.0;
/// Circumcenters of nested sets are at most this multiple of the larger diameter apart.
inline constexpr double kSubsetCenterFactor = 3.0 / 4.0;

struct CircumResult
{
    std::vector<double> center; ///< ambient coordinates, or chart coordinates for models
    double radius = 0.0;
    Index achieved_by = 0;      ///< input point at distance `radius` from the center
    int iterations = 0;
    double residual = 0.0;
    std::vector<std::string> flags;
};

// ---------------------------------------------------------------------------
// Euclidean smallest enclosing ball
// ---------------------------------------------------------------------------

namespace detail {

struct Ball
{
    Eigen::VectorXd center;
    double radius2 = -1.0; // empty ball
};

/// Ball through all support points, centred in their affine hull.
inline Ball ball_through(const std::vector<Eigen::VectorXd>& support)
{
    Ball b;
    if (support.empty())
        return b;
    const Eigen::VectorXd& q0 = support.front();
    if (support.size() == 1)
    {
        b.center = q0;
        b.radius2 = 0.0;
        return b;
    }
    const auto m = static_cast<Eigen::Index>(support.size() - 1);
    Eigen::MatrixXd V(q0.size(), m);
    for (Eigen::Index j = 0; j < m; ++j)
        V.col(j) = support[static_cast<std::size_t>(j) + 1] - q0;
    // 2 V^T V lambda = diag(V^T V)
    const Eigen::MatrixXd G = V.transpose() * V;
    const Eigen::VectorXd rhs = G.diagonal();
    const Eigen::VectorXd lambda = (2.0 * G).completeOrthogonalDecomposition().solve(rhs);
    b.center = q0 + V * lambda;
    b.radius2 = 0.0;
    for (const auto& q : support)
        b.radius2 = std::max(b.radius2, (q - b.center).squaredNorm());
    return b;
}

inline bool outside(const Eigen::VectorXd& p, const Ball& b)
{
    if (b.radius2 < 0)
        return true;
    return (p - b.center).squaredNorm() > b.radius2 * (1.0 + 1e-13) + 1e-300;
}

/// Move-to-front smallest enclosing ball (Welzl's recursion, depth <= d + 1).
inline Ball mtf_ball(const std::vector<Eigen::VectorXd>& pts, std::list<Index>& order,
                     std::list<Index>::iterator end, std::vector<Eigen::VectorXd>& support,
                     std::size_t max_support, int& calls)
{
    ++calls;
    Ball b = ball_through(support);
    if (support.size() == max_support)
        return b;
    for (auto it = order.begin(); it != end;)
    {
        auto next = std::next(it);
        if (outside(pts[*it], b))
        {
            support.push_back(pts[*it]);
            b = mtf_ball(pts, order, it, support, max_support, calls);
            support.pop_back();
            order.splice(order.begin(), order, it);
        }
        it = next;
    }
    return b;
}

inline CircumResult finish(const std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& c,
                           int iterations, double residual)
{
    CircumResult r;
    r.center.assign(c.data(), c.data() + c.size());
    for (Index i = 0; i < pts.size(); ++i)
    {
        const double d = (pts[i] - c).norm();
        if (d > r.radius)
        {
            r.radius = d;
            r.achieved_by = i;
        }
    }
    r.iterations = iterations;
    r.residual = residual;
    return r;
}

/// Smallest enclosing ball of vectors (exact for d <= kExactBallDim, iterative above).
inline constexpr std::size_t kExactBallDim = 12;

inline CircumResult minimax_ball(const std::vector<Eigen::VectorXd>& pts)
{
    if (pts.empty())
        throw PreconditionError("circumcenter of an empty set is undefined");
    const auto d = static_cast<std::size_t>(pts.front().size());
    if (d <= kExactBallDim)
    {
        std::list<Index> order;
        for (Index i = 0; i < pts.size(); ++i)
            order.push_back(i);
        std::vector<Eigen::VectorXd> support;
        int calls = 0;
        const Ball b = mtf_ball(pts, order, order.end(), support, d + 1, calls);
        // residual: spread of the distances from the center to its farthest points
        CircumResult r = finish(pts, b.center, calls, 0.0);
        r.residual = std::abs(r.radius - std::sqrt(b.radius2));
        return r;
    }
    // Badoiu-Clarkson: after k steps the radius is within R / sqrt(k) of optimal.
    constexpr int steps = 20000;
    Eigen::VectorXd c = pts.front();
    for (int k = 1; k <= steps; ++k)
    {
        Index far = 0;
        double best = -1;
        for (Index i = 0; i < pts.size(); ++i)
        {
            const double t = (pts[i] - c).squaredNorm();
            if (t > best)
            {
                best = t;
                far = i;
            }
        }
        c += (pts[far] - c) / static_cast<double>(k + 1);
    }
    CircumResult r = finish(pts, c, steps, 0.0);
    r.residual = r.radius / std::sqrt(static_cast<double>(steps));
    return r;
}

} // namespace detail

inline CircumResult euclidean_circumcenter(const PointCloud& points)
{
    if (points.empty())
        throw PreconditionError("euclidean_circumcenter: empty input");
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(points.size());
    for (Index i = 0; i < points.size(); ++i)
    {
        const auto p = points[i];
        pts.emplace_back(Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size())));
    }
    return detail::minimax_ball(pts);
}

// ---------------------------------------------------------------------------
// Geodesic circumcenters
// ---------------------------------------------------------------------------

namespace detail {

/// Local exponential/logarithm charts for the models with closed-form geodesics.
/// A base point is kept in "state" coordinates: the angle for the circle, a unit
/// 3-vector for the sphere, chart coordinates for the flat torus.
class TangentChart
{
public:
    explicit TangentChart(const ManifoldModel& m) : m_(m)
    {
        if (!m.has_geodesics())
            throw UnsupportedError("geodesic circumcenter unavailable for " + to_string(m.kind()));
    }

    using State = Eigen::VectorXd;

    State state_of(const ChartPoint& p) const
    {
        switch (m_.kind())
        {
        case ManifoldKind::circle: return Eigen::VectorXd::Constant(1, p[0]);
        case ManifoldKind::sphere2:
        {
            const auto u = ManifoldModel::unit_sphere(p);
            return Eigen::Vector3d(u[0], u[1], u[2]);
        }
        default: return Eigen::Vector2d(p[0], p[1]);
        }
    }

    ChartPoint chart_of(const State& s) const
    {
        switch (m_.kind())
        {
        case ManifoldKind::circle:
            return {std::fmod(std::fmod(s[0], 2 * std::numbers::pi) + 2 * std::numbers::pi,
                              2 * std::numbers::pi),
                    0.0};
        case ManifoldKind::sphere2: return ManifoldModel::sphere_chart(s[0], s[1], s[2]);
        default:
        {
            const double L = m_.primary();
            auto wrap = [L](double x) { return std::fmod(std::fmod(x, L) + L, L); };
            return {wrap(s[0]), wrap(s[1])};
        }
        }
    }

    double distance(const State& a, const State& b) const
    {
        switch (m_.kind())
        {
        case ManifoldKind::sphere2:
        {
            const Eigen::Vector3d u = a, w = b;
            return m_.primary() * std::atan2(u.cross(w).norm(), u.dot(w));
        }
        default: return m_.geodesic_distance(chart_of(a), chart_of(b));
        }
    }

    /// Tangent basis at `base` (sphere only): two orthonormal vectors orthogonal to base.
    std::pair<Eigen::Vector3d, Eigen::Vector3d> basis(const Eigen::Vector3d& base) const
    {
        Eigen::Vector3d helper = std::abs(base.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                                          : Eigen::Vector3d::UnitY();
        Eigen::Vector3d e1 = (helper - helper.dot(base) * base).normalized();
        Eigen::Vector3d e2 = base.cross(e1);
        return {e1, e2};
    }

    /// log_base(p) in an orthonormal tangent frame, scaled to length units.
    Eigen::VectorXd log(const State& base, const State& p) const
    {
        switch (m_.kind())
        {
        case ManifoldKind::circle:
        {
            double t = std::remainder(p[0] - base[0], 2 * std::numbers::pi);
            return Eigen::VectorXd::Constant(1, m_.primary() * t);
        }
        case ManifoldKind::sphere2:
        {
            const Eigen::Vector3d b = base, q = p;
            const auto [e1, e2] = basis(b);
            const Eigen::Vector3d perp = q - q.dot(b) * b;
            const double s = perp.norm();
            const double angle = std::atan2(s, q.dot(b));
            if (s == 0.0)
                return Eigen::Vector2d::Zero();
            const Eigen::Vector3d dir = perp / s;
            return m_.primary() * angle * Eigen::Vector2d(dir.dot(e1), dir.dot(e2));
        }
        default:
        {
            const double L = m_.primary();
            return Eigen::Vector2d(std::remainder(p[0] - base[0], L), std::remainder(p[1] - base[1], L));
        }
        }
    }

    State exp(const State& base, const Eigen::VectorXd& t) const
    {
        switch (m_.kind())
        {
        case ManifoldKind::sphere2:
        {
            const Eigen::Vector3d b = base;
            const auto [e1, e2] = basis(b);
            const Eigen::Vector3d v = (t[0] * e1 + t[1] * e2) / m_.primary();
            const double a = v.norm();
            if (a == 0.0)
                return base;
            Eigen::Vector3d out = std::cos(a) * b + std::sin(a) * v / a;
            return out.normalized();
        }
        case ManifoldKind::circle: return Eigen::VectorXd::Constant(1, base[0] + t[0] / m_.primary());
        default: return base + t;
        }
    }

    std::size_t tangent_dim() const { return m_.kind() == ManifoldKind::circle ? 1 : 2; }

private:
    const ManifoldModel& m_;
};

} // namespace detail

/// Number of starts of the geodesic circumcenter solver.
inline constexpr int kCircumcenterStarts = 8;

/**
 * Geodesic circumcenter on a model with closed-form geodesics.
 *
 * Descent on f(c) = max_i d(c, p_i) from kCircumcenterStarts deterministic
 * starts (the first input points, then seeded perturbations of the first
 * point). Each step moves to the exponential of the Euclidean minimax center
 * of the log-mapped points, halving the step until f decreases; iteration
 * stops once the accepted step is below 1e-12 (or no halving helps).
 * `residual` is the length of the last accepted step.
 *
 * Flags "existence not guaranteed" when diam >= Delta of the model.
 */
inline CircumResult geodesic_circumcenter(const ManifoldModel& m, std::span<const ChartPoint> points,
                                          std::uint64_t seed = 0)
{
    if (points.empty())
        throw PreconditionError("geodesic_circumcenter: empty input");
    const detail::TangentChart chart(m);
    std::vector<detail::TangentChart::State> pts;
    for (const auto& p : points)
        pts.push_back(chart.state_of(p));

    double diam = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            diam = std::max(diam, chart.distance(pts[i], pts[j]));

    auto objective = [&](const detail::TangentChart::State& c) {
        double f = 0.0;
        for (const auto& p : pts)
            f = std::max(f, chart.distance(c, p));
        return f;
    };

    std::vector<detail::TangentChart::State> starts;
    for (std::size_t i = 0; i < pts.size() && starts.size() < kCircumcenterStarts / 2; ++i)
        starts.push_back(pts[i]);
    Rng rng(seed);
    while (starts.size() < static_cast<std::size_t>(kCircumcenterStarts))
    {
        Eigen::VectorXd t(chart.tangent_dim());
        for (Eigen::Index k = 0; k < t.size(); ++k)
            t[k] = (rng.uniform01() - 0.5) * diam;
        starts.push_back(chart.exp(pts.front(), t));
    }

    CircumResult best;
    double best_f = std::numeric_limits<double>::infinity();
    detail::TangentChart::State best_c;
    int total_iterations = 0;
    double best_residual = 0.0;
    for (const auto& start : starts)
    {
        detail::TangentChart::State c = start;
        double f = objective(c);
        double last_step = 0.0;
        for (int iter = 0; iter < 200; ++iter)
        {
            ++total_iterations;
            std::vector<Eigen::VectorXd> logs;
            logs.reserve(pts.size());
            for (const auto& p : pts)
                logs.push_back(chart.log(c, p));
            Eigen::VectorXd step = Eigen::Map<const Eigen::VectorXd>(
                detail::minimax_ball(logs).center.data(), static_cast<Eigen::Index>(chart.tangent_dim()));
            bool accepted = false;
            for (int halving = 0; halving < 60; ++halving)
            {
                const auto cand = chart.exp(c, step);
                const double fc = objective(cand);
                if (fc < f)
                {
                    c = cand;
                    f = fc;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted)
                break;
            last_step = step.norm();
            if (last_step < 1e-12)
                break;
        }
        if (f < best_f)
        {
            best_f = f;
            best_c = c;
            best_residual = last_step;
        }
    }

    best.radius = 0.0;
    for (Index i = 0; i < pts.size(); ++i)
    {
        const double d = chart.distance(best_c, pts[i]);
        if (d > best.radius)
        {
            best.radius = d;
            best.achieved_by = i;
        }
    }
    const ChartPoint cc = chart.chart_of(best_c);
    best.center = m.kind() == ManifoldKind::circle ? std::vector<double>{cc[0]}
                                                   : std::vector<double>{cc[0], cc[1]};
    best.iterations = total_iterations;
    best.residual = best_residual;
    if (diam >= m.constants().delta.value)
        best.flags.push_back("existence not guaranteed: diameter >= Delta");
    return best;
}

inline ChartPoint center_chart(const CircumResult& r)
{
    return {r.center.at(0), r.center.size() > 1 ? r.center[1] : 0.0};
}

// ---------------------------------------------------------------------------
// Jung bounds
// ---------------------------------------------------------------------------

/**
 * Smallest diameter a set in an n-manifold with sectional curvature <= kappa
 * can have given circumradius R:
 *   kappa < 0: (2/sqrt(-k)) asinh(c sinh(sqrt(-k) R))
 *   kappa = 0: 2 R c
 *   kappa > 0: (2/sqrt(k)) asin(c sin(sqrt(k) R)),  R in [0, pi / (2 sqrt(k))]
 * with c = sqrt((n + 1) / (2n)).
 */
template <class Real>
Real jung_min_diam(Real R, int n, Real kappa)
{
    using std::asin;
    using std::asinh;
    using std::sin;
    using std::sinh;
    using std::sqrt;
    detail::require(R >= Real(0), "jung_min_diam: R must be non-negative");
    detail::require(n >= 1, "jung_min_diam: n must be at least 1");
    const Real c = sqrt(Real(n + 1) / Real(2 * n));
    if (kappa == Real(0))
        return Real(2) * R * c;
    if (kappa < Real(0))
    {
        const Real s = sqrt(-kappa);
        return Real(2) / s * asinh(c * sinh(s * R));
    }
    const Real s = sqrt(kappa);
    detail::require(R <= Real(std::numbers::pi) / (Real(2) * s),
                    "jung_min_diam: for kappa > 0 the bound holds only for R <= pi / (2 sqrt(kappa))");
    return Real(2) / s * asin(c * sin(s * R));
}

/// J(r) = (2 / sqrt(kappa)) asin(sqrt((n+1)/(2n)) sin(sqrt(kappa) r)), for 0 < r <= pi / (4 sqrt(kappa)).
template <class Real>
Real jung_J(Real r, Real kappa, int n)
{
    using std::sqrt;
    detail::require(kappa > Real(0), "jung_J: kappa must be positive");
    detail::require(r > Real(0) && r <= Real(std::numbers::pi) / (Real(4) * sqrt(kappa)),
                    "jung_J: r must lie in (0, pi / (4 sqrt(kappa))]");
    return jung_min_diam<Real>(r, n, kappa);
}

struct CircumBoundReport
{
    double diam = 0.0;
    double radius = 0.0;
    double ratio = 0.0;        ///< diam / radius (infinite for a singleton)
    bool in_hypothesis = true; ///< diam < Delta
    bool pass = true;          ///< diam >= (4/3) radius - 1e-8
    std::vector<std::string> flags;
};

namespace detail {

inline CircumBoundReport circum_report(double diam, double radius, double delta)
{
    CircumBoundReport r;
    r.diam = diam;
    r.radius = radius;
    r.ratio = radius > 0 ? diam / radius : std::numeric_limits<double>::infinity();
    r.in_hypothesis = diam < delta;
    r.pass = diam >= kCircumradiusFactor * radius - 1e-8;
    if (!r.in_hypothesis)
        r.flags.push_back("out of hypothesis: diameter >= Delta");
    return r;
}

} // namespace detail

inline CircumBoundReport check_circum_bound(const ManifoldModel& m, std::span<const ChartPoint> points,
                                            std::uint64_t seed = 0)
{
    const auto c = geodesic_circumcenter(m, points, seed);
    double diam = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            diam = std::max(diam, m.geodesic_distance(points[i], points[j]));
    auto r = detail::circum_report(diam, c.radius, m.constants().delta.value);
    r.flags.insert(r.flags.end(), c.flags.begin(), c.flags.end());
    return r;
}

/// Euclidean space: flat, Delta infinite.
inline CircumBoundReport check_circum_bound(const PointCloud& points)
{
    const auto c = euclidean_circumcenter(points);
    double diam = 0.0;
    for (Index i = 0; i < points.size(); ++i)
        for (Index j = i + 1; j < points.size(); ++j)
            diam = std::max(diam, euclidean_distance(points[i], points[j]));
    return detail::circum_report(diam, c.radius, std::numeric_limits<double>::infinity());
}

struct SubsetCenterReport
{
    double distance = 0.0; ///< d(center(B), center(A))
    double bound = 0.0;    ///< (3/4) diam A
    bool in_hypothesis = true;
    bool pass = true;      ///< distance <= bound + 1e-6
    std::vector<std::string> flags;
};

/// Compares the circumcenters of A and of the sub-family B (indices into A).
inline SubsetCenterReport check_subset_center(const ManifoldModel& m, std::span<const ChartPoint> A,
                                              std::span<const Index> B, std::uint64_t seed = 0)
{
    detail::require(!B.empty(), "check_subset_center: B must be non-empty");
    std::vector<ChartPoint> b;
    for (Index i : B)
    {
        if (i >= A.size())
            throw PreconditionError("check_subset_center: B is not a subset of A");
        b.push_back(A[i]);
    }
    const auto ca = geodesic_circumcenter(m, A, seed);
    const auto cb = geodesic_circumcenter(m, b, seed);
    double diam = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = i + 1; j < A.size(); ++j)
            diam = std::max(diam, m.geodesic_distance(A[i], A[j]));
    SubsetCenterReport r;
    r.distance = m.geodesic_distance(center_chart(ca), center_chart(cb));
    r.bound = kSubsetCenterFactor * diam;
    r.in_hypothesis = diam < m.constants().delta.value;
    r.pass = r.distance <= r.bound + 1e-6;
    if (!r.in_hypothesis)
        r.flags.push_back("out of hypothesis: diameter >= Delta");
    return r;
}

} // namespace ripsrecon

namespace ripsrecon {

// ---------------------------------------------------------------------------
// Seeded campaigns
// ---------------------------------------------------------------------------

/// `count` points within geodesic distance `radius` of a random center.
inline std::vector<ChartPoint> random_cluster(const ManifoldModel& m, std::size_t count, double radius, Rng& rng)
{
    const detail::TangentChart chart(m);
    const auto c = chart.state_of(detail::random_point(m, rng));
    std::vector<ChartPoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        Eigen::VectorXd t(chart.tangent_dim());
        if (t.size() == 1)
            t[0] = rng.uniform(-radius, radius);
        else
        {
            const double a = rng.uniform(0.0, 2 * std::numbers::pi);
            const double r = radius * std::sqrt(rng.uniform01());
            t << r * std::cos(a), r * std::sin(a);
        }
        out.push_back(chart.chart_of(chart.exp(c, t)));
    }
    return out;
}

struct CampaignReport
{
    std::string name;
    std::size_t trials = 0;
    std::size_t skipped = 0;  ///< trials outside the hypothesis
    std::size_t failures = 0;
    double worst = -std::numeric_limits<double>::infinity(); ///< largest violation amount (<= tolerance passes)
    bool pass() const { return failures == 0 && trials > skipped; }
};

/// diam >= (4/3) circumradius on random clusters with diam < Delta.
inline CampaignReport circumradius_campaign(const ManifoldModel& m, std::size_t trials, std::uint64_t seed)
{
    CampaignReport r{"circumradius", trials};
    Rng rng(seed);
    const double delta = m.constants().delta.value;
    for (std::size_t t = 0; t < trials; ++t)
    {
        const std::size_t count = 2 + rng.index(9);
        const double radius = rng.uniform(0.01, 0.5) * delta;
        const auto pts = random_cluster(m, count, radius, rng);
        const auto rep = check_circum_bound(m, pts, t);
        if (!rep.in_hypothesis)
        {
            ++r.skipped;
            continue;
        }
        r.worst = std::max(r.worst, kCircumradiusFactor * rep.radius - rep.diam);
        if (!rep.pass)
            ++r.failures;
    }
    return r;
}

/// d(Theta(B), Theta(A)) <= (3/4) diam A for random nested B in A with diam A < Delta.
inline CampaignReport subset_center_campaign(const ManifoldModel& m, std::size_t trials, std::uint64_t seed)
{
    CampaignReport r{"subset-center", trials};
    Rng rng(seed);
    const double delta = m.constants().delta.value;
    for (std::size_t t = 0; t < trials; ++t)
    {
        const std::size_t count = 2 + rng.index(9);
        const double radius = rng.uniform(0.01, 0.5) * delta;
        const auto A = random_cluster(m, count, radius, rng);
        std::vector<Index> B;
        for (Index i = 0; i < A.size(); ++i)
            if (rng.uniform01() < 0.5)
                B.push_back(i);
        if (B.empty())
            B.push_back(rng.index(A.size()));
        const auto rep = check_subset_center(m, A, B, t);
        if (!rep.in_hypothesis)
        {
            ++r.skipped;
            continue;
        }
        r.worst = std::max(r.worst, rep.distance - rep.bound);
        if (!rep.pass)
            ++r.failures;
    }
    return r;
}

} // namespace ripsrecon
