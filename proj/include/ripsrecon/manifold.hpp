#pragma once

/**
 * Model manifolds with exact geodesics and known geometric constants.
 *
 * Chart coordinates (ChartPoint = {a, b}):
 *   circle(R)             a = angle theta; b unused
 *   sphere2(R)            a = colatitude in [0, pi], b = longitude
 *   flat_torus(L)         (a, b) in [0, L)^2, identified mod L
 *   embedded_torus(R, r)  a = u (around the axis), b = v (around the tube)
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "homology.hpp"
#include "metric.hpp"
#include "random.hpp"

namespace ripsrecon {

using ChartPoint = std::array<double, 2>;

enum class ManifoldKind
{
    circle,
    sphere2,
    flat_torus,
    embedded_torus
};

inline std::string to_string(ManifoldKind k)
{
    switch (k)
    {
    case ManifoldKind::circle: return "circle";
    case ManifoldKind::sphere2: return "sphere2";
    case ManifoldKind::flat_torus: return "flat_torus";
    case ManifoldKind::embedded_torus: return "embedded_torus";
    }
    return "?";
}

/// Where a constant comes from: a closed form for the model, or a reach-derived lower bound.
enum class Provenance
{
    certified,
    derived_bound
};

struct Constant
{
    double value = 0.0;
    Provenance provenance = Provenance::certified;
};

/// Condition number ingredients. kappa_sup is absent for 1-dimensional models,
/// tau for models without an embedding.
struct ConstantsReport
{
    Constant rho;
    std::optional<Constant> kappa_sup;
    std::optional<Constant> tau;
    Constant delta;
};

/// Delta = rho if kappa <= 0 (or undefined), else min(rho, pi / (4 sqrt(kappa))).
template <class Real>
Real delta_of(Real rho, std::optional<Real> kappa_sup)
{
    detail::require(rho > Real(0), "delta_of: rho must be positive");
    if (!kappa_sup || *kappa_sup <= Real(0))
        return rho;
    using std::sqrt;
    using std::min;
    return min(rho, Real(std::numbers::pi) / (Real(4) * sqrt(*kappa_sup)));
}

inline double delta_of(double rho, std::optional<double> kappa_sup)
{
    return delta_of<double>(rho, kappa_sup);
}

class ManifoldModel
{
public:
    static ManifoldModel circle(double R)
    {
        detail::require(R > 0, "circle: radius must be positive");
        ManifoldModel m(ManifoldKind::circle, R, 0.0);
        // n = 1 has no sectional curvature; the flat branch of Delta applies.
        m.constants_.rho = {std::numbers::pi * R / 2};
        m.constants_.tau = Constant{R};
        m.constants_.delta = {delta_of(m.constants_.rho.value, std::nullopt)};
        m.betti_truth_ = {1, 1};
        m.intrinsic_dim_ = 1;
        return m;
    }

    static ManifoldModel sphere2(double R)
    {
        detail::require(R > 0, "sphere2: radius must be positive");
        ManifoldModel m(ManifoldKind::sphere2, R, 0.0);
        m.constants_.rho = {std::numbers::pi * R / 2};
        m.constants_.kappa_sup = Constant{1.0 / (R * R)};
        m.constants_.tau = Constant{R};
        m.constants_.delta = {delta_of(m.constants_.rho.value, std::optional(1.0 / (R * R)))};
        m.betti_truth_ = {1, 0, 1};
        m.intrinsic_dim_ = 2;
        return m;
    }

    /// Square flat torus R^2 / (L Z)^2. Convexity radius L/4: smaller balls are
    /// isometric to Euclidean disks; at L/4 antipodal boundary pairs have two geodesics.
    static ManifoldModel flat_torus(double L)
    {
        detail::require(L > 0, "flat_torus: side must be positive");
        ManifoldModel m(ManifoldKind::flat_torus, L, 0.0);
        m.constants_.rho = {L / 4};
        m.constants_.kappa_sup = Constant{0.0};
        m.constants_.delta = {delta_of(m.constants_.rho.value, std::optional(0.0))};
        m.betti_truth_ = {1, 2, 1};
        m.intrinsic_dim_ = 2;
        return m;
    }

    /// Torus of revolution. Reach min(r, R - r): the medial axis is the core
    /// circle (distance r) together with the symmetry axis (distance R - r).
    /// rho and Delta are reach-derived lower bounds.
    static ManifoldModel embedded_torus(double R, double r)
    {
        detail::require(r > 0 && R > r, "embedded_torus: need R > r > 0");
        ManifoldModel m(ManifoldKind::embedded_torus, R, r);
        const double tau = std::min(r, R - r);
        m.constants_.tau = Constant{tau};
        // Gaussian curvature cos v / (r (R + r cos v)), largest on the outer equator.
        m.constants_.kappa_sup = Constant{1.0 / (r * (R + r))};
        m.constants_.rho = {std::numbers::pi * tau / 2, Provenance::derived_bound};
        m.constants_.delta = {delta_of(m.constants_.rho.value, std::optional(1.0 / (r * (R + r)))),
                              Provenance::derived_bound};
        m.betti_truth_ = {1, 2, 1};
        m.intrinsic_dim_ = 2;
        return m;
    }

    ManifoldKind kind() const { return kind_; }
    double primary() const { return p0_; }   ///< R, R, L, or R_major
    double secondary() const { return p1_; } ///< r_minor for the embedded torus
    const ConstantsReport& constants() const { return constants_; }
    ConstantsReport& constants() { return constants_; }
    const std::vector<std::size_t>& betti_truth() const { return betti_truth_; }
    int intrinsic_dim() const { return intrinsic_dim_; }

    bool has_geodesics() const { return kind_ != ManifoldKind::embedded_torus; }
    bool has_embedding() const { return kind_ != ManifoldKind::flat_torus; }
    std::size_t ambient_dim() const { return kind_ == ManifoldKind::circle ? 2 : 3; }

    /// Intrinsic (shortest-path) distance in closed form.
    double geodesic_distance(const ChartPoint& p, const ChartPoint& q) const
    {
        switch (kind_)
        {
        case ManifoldKind::circle:
        {
            const double t = wrap_difference(p[0] - q[0], 2 * std::numbers::pi);
            return p0_ * t;
        }
        case ManifoldKind::sphere2:
        {
            const auto u = unit_sphere(p), v = unit_sphere(q);
            const double cx = u[1] * v[2] - u[2] * v[1];
            const double cy = u[2] * v[0] - u[0] * v[2];
            const double cz = u[0] * v[1] - u[1] * v[0];
            const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
            return p0_ * std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
        }
        case ManifoldKind::flat_torus:
        {
            const double dx = wrap_difference(p[0] - q[0], p0_);
            const double dy = wrap_difference(p[1] - q[1], p0_);
            return std::hypot(dx, dy);
        }
        case ManifoldKind::embedded_torus: break;
        }
        throw UnsupportedError("geodesic distance unavailable; use Euclidean pipeline");
    }

    std::vector<double> embed(const ChartPoint& p) const
    {
        switch (kind_)
        {
        case ManifoldKind::circle: return {p0_ * std::cos(p[0]), p0_ * std::sin(p[0])};
        case ManifoldKind::sphere2:
        {
            const auto u = unit_sphere(p);
            return {p0_ * u[0], p0_ * u[1], p0_ * u[2]};
        }
        case ManifoldKind::embedded_torus:
        {
            const double w = p0_ + p1_ * std::cos(p[1]);
            return {w * std::cos(p[0]), w * std::sin(p[0]), p1_ * std::sin(p[1])};
        }
        case ManifoldKind::flat_torus: break;
        }
        throw UnsupportedError("abstract metric space; no canonical embedding used");
    }

    /// Outward unit normal of the embedded hypersurface (circle, sphere, embedded torus).
    std::vector<double> unit_normal(const ChartPoint& p) const
    {
        switch (kind_)
        {
        case ManifoldKind::circle: return {std::cos(p[0]), std::sin(p[0])};
        case ManifoldKind::sphere2:
        {
            const auto u = unit_sphere(p);
            return {u[0], u[1], u[2]};
        }
        case ManifoldKind::embedded_torus:
            return {std::cos(p[1]) * std::cos(p[0]), std::cos(p[1]) * std::sin(p[0]), std::sin(p[1])};
        case ManifoldKind::flat_torus: break;
        }
        throw UnsupportedError("abstract metric space; no canonical embedding used");
    }

    PointCloud embed_all(const std::vector<ChartPoint>& pts) const
    {
        PointCloud pc(ambient_dim());
        for (const auto& p : pts)
            pc.push_back(embed(p));
        return pc;
    }

    /// Chart point of a (non-zero) ambient vector, sphere only.
    static ChartPoint sphere_chart(double x, double y, double z)
    {
        const double n = std::sqrt(x * x + y * y + z * z);
        return {std::acos(std::clamp(z / n, -1.0, 1.0)), std::atan2(y, x)};
    }

    /// Geodesic distance matrix of chart points.
    FiniteMetricSpace geodesic_metric(const std::vector<ChartPoint>& pts) const
    {
        return FiniteMetricSpace::from_function(
            pts.size(), [&](Index i, Index j) { return geodesic_distance(pts[i], pts[j]); },
            MetricCheck::structural);
    }

    /// Distance in the metric a sample of this model is measured in: geodesic
    /// when available, Euclidean between embeddings otherwise.
    double distance(const ChartPoint& p, const ChartPoint& q) const
    {
        if (has_geodesics())
            return geodesic_distance(p, q);
        return euclidean_distance(embed(p), embed(q));
    }

    static std::array<double, 3> unit_sphere(const ChartPoint& p)
    {
        const double s = std::sin(p[0]);
        return {s * std::cos(p[1]), s * std::sin(p[1]), std::cos(p[0])};
    }

    /// |x| reduced to the representative of x mod period in [0, period/2].
    static double wrap_difference(double x, double period)
    {
        double t = std::fmod(std::abs(x), period);
        return std::min(t, period - t);
    }

private:
    ManifoldModel(ManifoldKind k, double p0, double p1) : kind_(k), p0_(p0), p1_(p1) {}

    ManifoldKind kind_;
    double p0_, p1_;
    ConstantsReport constants_;
    std::vector<std::size_t> betti_truth_;
    int intrinsic_dim_ = 0;
};

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// grid(n): n points per intrinsic axis (n points in total for the circle).
/// random(n, seed): n i.i.d. points, uniform for the Riemannian measure except
/// on the embedded torus (uniform in the chart).
struct SamplerSpec
{
    enum class Type
    {
        grid,
        random
    } type = Type::grid;
    std::size_t n = 0;
    std::uint64_t seed = 0;

    static SamplerSpec grid(std::size_t n) { return {Type::grid, n, 0}; }
    static SamplerSpec random(std::size_t n, std::uint64_t seed) { return {Type::random, n, seed}; }
};

struct Sample
{
    std::vector<ChartPoint> points;
    /// Certified upper bound on d_H(sample, model), in the model's sampling metric.
    double fill_radius_bound = 0.0;
};

/// Cap on the points of an internally generated fine net (no distance matrix is built).
inline constexpr std::size_t kFineNetCap = 400'000;

namespace detail {

/// Chart grid with covering radius <= fineness in the model's sampling metric,
/// and the radius actually certified.
inline Sample fine_grid(const ManifoldModel& m, double fineness, std::size_t cap)
{
    require(fineness > 0, "fineness must be positive");
    const double two_pi = 2 * std::numbers::pi;
    Sample s;
    switch (m.kind())
    {
    case ManifoldKind::circle:
    {
        const auto n = static_cast<std::size_t>(std::ceil(std::numbers::pi * m.primary() / fineness));
        if (n > cap)
            throw PreconditionError("reference net would exceed " + std::to_string(cap) +
                                    " points; use a coarser fineness");
        for (std::size_t i = 0; i < n; ++i)
            s.points.push_back({two_pi * static_cast<double>(i) / static_cast<double>(n), 0.0});
        s.fill_radius_bound = std::numbers::pi * m.primary() / static_cast<double>(n);
        return s;
    }
    case ManifoldKind::sphere2:
    {
        // Rings of constant colatitude theta_i = i h with c_i uniform longitudes.
        // A point lies within h/2 (in colatitude) of some ring; a chart-straight
        // path to the nearest ring point has length at most
        // R sqrt((h/2)^2 + (s_i dphi_i / 2)^2), with s_i the largest sin(theta)
        // over the half-band around ring i.
        const double R = m.primary();
        const auto k = static_cast<std::size_t>(std::ceil(std::numbers::pi * R / fineness));
        const double h = std::numbers::pi / static_cast<double>(k);
        auto ring_size = [&](double theta) {
            return std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(2.0 * static_cast<double>(k) * std::sin(theta))));
        };
        std::size_t total = 2;
        for (std::size_t i = 1; i < k; ++i)
            total += ring_size(h * static_cast<double>(i));
        if (total > cap)
            throw PreconditionError("reference net would exceed " + std::to_string(cap) +
                                    " points; use a coarser fineness");
        s.points.push_back({0.0, 0.0});
        double worst = h / 2; // caps around the poles
        for (std::size_t i = 1; i < k; ++i)
        {
            const double theta = h * static_cast<double>(i);
            const std::size_t count = ring_size(theta);
            const double dphi = two_pi / static_cast<double>(count);
            for (std::size_t j = 0; j < count; ++j)
                s.points.push_back({theta, dphi * static_cast<double>(j)});
            const double lo = theta - h / 2, hi = theta + h / 2;
            const double smax = (lo <= std::numbers::pi / 2 && hi >= std::numbers::pi / 2)
                                    ? 1.0
                                    : std::max(std::sin(lo), std::sin(hi));
            worst = std::max(worst, std::hypot(h / 2, smax * dphi / 2));
        }
        s.points.push_back({std::numbers::pi, 0.0});
        s.fill_radius_bound = R * worst;
        return s;
    }
    case ManifoldKind::flat_torus:
    case ManifoldKind::embedded_torus:
    {
        // covering radius of an h x h cell: half its diagonal in a flat metric
        // that dominates the model's metric
        const double L = m.kind() == ManifoldKind::flat_torus ? m.primary() : two_pi;
        const double scale_u = m.kind() == ManifoldKind::flat_torus ? 1.0 : (m.primary() + m.secondary());
        const double scale_v = m.kind() == ManifoldKind::flat_torus ? 1.0 : m.secondary();
        const double diag_per_h = std::hypot(scale_u, scale_v);
        const auto k = static_cast<std::size_t>(std::ceil(L * diag_per_h / (2 * fineness)));
        if (k * k > cap)
            throw PreconditionError("reference net would exceed " + std::to_string(cap) +
                                    " points; use a coarser fineness");
        const double h = L / static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                s.points.push_back({h * static_cast<double>(i), h * static_cast<double>(j)});
        s.fill_radius_bound = h * diag_per_h / 2;
        return s;
    }
    }
    return s;
}

inline ChartPoint random_point(const ManifoldModel& m, Rng& rng)
{
    const double two_pi = 2 * std::numbers::pi;
    switch (m.kind())
    {
    case ManifoldKind::circle: return {rng.uniform(0.0, two_pi), 0.0};
    case ManifoldKind::sphere2:
    {
        const double z = rng.uniform(-1.0, 1.0);
        return {std::acos(z), rng.uniform(0.0, two_pi)};
    }
    case ManifoldKind::flat_torus:
    {
        const double a = rng.uniform(0.0, m.primary());
        return {a, rng.uniform(0.0, m.primary())};
    }
    case ManifoldKind::embedded_torus:
    {
        const double u = rng.uniform(0.0, two_pi);
        return {u, rng.uniform(0.0, two_pi)};
    }
    }
    return {};
}

/// max over a in `from` of the distance to the nearest b in `to`, in the model's
/// sampling metric. Circle and sphere distances are monotone in the chord, so
/// the search runs on embedded coordinates.
inline double directed_hausdorff(const ManifoldModel& m, const std::vector<ChartPoint>& from,
                                 const std::vector<ChartPoint>& to)
{
    if (m.kind() == ManifoldKind::circle || m.kind() == ManifoldKind::sphere2)
    {
        const PointCloud a = m.embed_all(from), b = m.embed_all(to);
        const double chord = hausdorff_directed(a, b);
        const double R = m.primary();
        return 2 * R * std::asin(std::min(1.0, chord / (2 * R)));
    }
    double worst = 0.0;
    for (const auto& q : from)
    {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : to)
            best = std::min(best, m.distance(p, q));
        worst = std::max(worst, best);
    }
    return worst;
}

/// Nominal spacing of n random points: (volume / n)^(1/dim).
inline double nominal_spacing(const ManifoldModel& m, std::size_t n)
{
    const double pi = std::numbers::pi;
    const double N = static_cast<double>(n);
    switch (m.kind())
    {
    case ManifoldKind::circle: return 2 * pi * m.primary() / N;
    case ManifoldKind::sphere2: return std::sqrt(4 * pi * m.primary() * m.primary() / N);
    case ManifoldKind::flat_torus: return m.primary() / std::sqrt(N);
    case ManifoldKind::embedded_torus:
        return std::sqrt(4 * pi * pi * m.primary() * m.secondary() / N);
    }
    return 0.0;
}

} // namespace detail

/**
 * Sample points of the model with a certified Hausdorff bound.
 *
 * Grid bounds are closed-form covering radii. Random bounds are measured
 * against a net ten times finer than the sample's nominal spacing:
 * d_H <= max over net points of the distance to the sample + net fill radius.
 */
inline Sample sample(const ManifoldModel& m, const SamplerSpec& spec)
{
    detail::require(spec.n >= 1, "sample: n must be at least 1");
    const double pi = std::numbers::pi;
    Sample s;
    if (spec.type == SamplerSpec::Type::grid)
    {
        const std::size_t n = spec.n;
        switch (m.kind())
        {
        case ManifoldKind::circle:
            for (std::size_t i = 0; i < n; ++i)
                s.points.push_back({2 * pi * static_cast<double>(i) / static_cast<double>(n), 0.0});
            s.fill_radius_bound = pi * m.primary() / static_cast<double>(n);
            return s;
        case ManifoldKind::sphere2:
        {
            // n latitude bands: poles plus n-1 rings of 2n longitudes
            const double h = pi / static_cast<double>(n);
            s.points.push_back({0.0, 0.0});
            for (std::size_t i = 1; i < n; ++i)
                for (std::size_t j = 0; j < 2 * n; ++j)
                    s.points.push_back({h * static_cast<double>(i), h * static_cast<double>(j)});
            if (n > 1)
                s.points.push_back({pi, 0.0});
            // chart metric R^2 (dtheta^2 + sin^2 dphi^2) <= R^2 (dtheta^2 + dphi^2)
            s.fill_radius_bound = n > 1 ? m.primary() * std::hypot(h / 2, h / 2) : pi * m.primary();
            return s;
        }
        case ManifoldKind::flat_torus:
        case ManifoldKind::embedded_torus:
        {
            const double L = m.kind() == ManifoldKind::flat_torus ? m.primary() : 2 * pi;
            const double h = L / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    s.points.push_back({h * static_cast<double>(i), h * static_cast<double>(j)});
            const double su = m.kind() == ManifoldKind::flat_torus ? 1.0 : m.primary() + m.secondary();
            const double sv = m.kind() == ManifoldKind::flat_torus ? 1.0 : m.secondary();
            s.fill_radius_bound = h * std::hypot(su, sv) / 2;
            return s;
        }
        }
    }
    Rng rng(spec.seed);
    for (std::size_t i = 0; i < spec.n; ++i)
        s.points.push_back(detail::random_point(m, rng));
    const double fine = detail::nominal_spacing(m, spec.n) / 10;
    const Sample net = detail::fine_grid(m, fine, kFineNetCap);
    s.fill_radius_bound = detail::directed_hausdorff(m, net.points, s.points) + net.fill_radius_bound;
    return s;
}

/**
 * Displaces every point by a vector drawn uniformly from the closed ball of
 * radius eta (direction from normalised Gaussians, radius eta * U^(1/d)), so
 * d_H(before, after) <= eta.
 */
inline PointCloud perturb(const PointCloud& points, double eta, std::uint64_t seed)
{
    detail::require(eta >= 0, "perturb: eta must be non-negative");
    if (eta == 0.0)
        return points;
    Rng rng(seed);
    PointCloud out(points.dim());
    std::vector<double> p(points.dim()), dir(points.dim());
    for (Index i = 0; i < points.size(); ++i)
    {
        double norm = 0.0;
        do
        {
            norm = 0.0;
            for (auto& x : dir)
            {
                x = rng.normal();
                norm += x * x;
            }
            norm = std::sqrt(norm);
        } while (norm == 0.0);
        const double radius = eta * std::pow(rng.uniform01(), 1.0 / static_cast<double>(points.dim()));
        for (std::size_t k = 0; k < p.size(); ++k)
            p[k] = points[i][k] + radius * dir[k] / norm;
        out.push_back(p);
    }
    return out;
}

/// Finite stand-in for the model: a net with fill radius <= fineness and its
/// exact metric (geodesic where available, Euclidean between embeddings otherwise).
struct ReferenceNet
{
    std::vector<ChartPoint> points;
    double fill_radius_bound = 0.0;
    FiniteMetricSpace metric;
};

inline constexpr std::size_t kReferenceNetCap = 5'000; // dense matrix: 200 MB at the cap

inline ReferenceNet reference_net(const ManifoldModel& m, double fineness,
                                  std::size_t cap = kReferenceNetCap)
{
    detail::require(fineness > 0, "reference_net: fineness must be positive");
    Sample g = detail::fine_grid(m, fineness, cap);
    ReferenceNet net;
    net.fill_radius_bound = g.fill_radius_bound;
    net.points = std::move(g.points);
    net.metric = FiniteMetricSpace::from_function(
        net.points.size(), [&](Index i, Index j) { return m.distance(net.points[i], net.points[j]); },
        MetricCheck::structural);
    return net;
}

/**
 * Reference net refining the grid sample of size n: the grid of size n k for
 * the smallest k whose fill radius is at most `fineness`. Grids of this family
 * are nested, so every point of sample(m, grid(n)) is (up to rounding) a net point.
 */
inline ReferenceNet nested_grid_net(const ManifoldModel& m, std::size_t n, double fineness,
                                    std::size_t cap = kReferenceNetCap)
{
    detail::require(n >= 1 && fineness > 0, "nested_grid_net: n and fineness must be positive");
    for (std::size_t k = 1;; ++k)
    {
        Sample g = sample(m, SamplerSpec::grid(n * k));
        if (g.points.size() > cap)
            throw PreconditionError("reference net would exceed " + std::to_string(cap) +
                                    " points; use a coarser fineness");
        if (g.fill_radius_bound > fineness)
            continue;
        ReferenceNet net;
        net.fill_radius_bound = g.fill_radius_bound;
        net.points = std::move(g.points);
        net.metric = FiniteMetricSpace::from_function(
            net.points.size(), [&](Index i, Index j) { return m.distance(net.points[i], net.points[j]); },
        MetricCheck::structural);
        return net;
    }
}

} // namespace ripsrecon
