#pragma once

/**
 * Scale windows, reach-derived bounds, the chord/geodesic distortion bound,
 * and numerical verifiers for the surjectivity construction and the
 * contiguity chain behind the reconstruction theorems.
 *
 * Formulas are templates over the scalar type so they can be evaluated in
 * exact rational arithmetic as well as in double.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "complex.hpp"
#include "error.hpp"
#include "jung.hpp"
#include "manifold.hpp"
#include "maps.hpp"
#include "metric.hpp"
#include "random.hpp"

namespace ripsrecon {

// ---------------------------------------------------------------------------
// Scale windows
// ---------------------------------------------------------------------------

template <class Real = double>
struct ScaleWindow
{
    Real lower{};         ///< always exclusive
    Real upper{};
    bool upper_inclusive = false;
    Real zeta{};
    bool empty = true;

    bool contains(const Real& beta) const
    {
        if (empty || !(lower < beta))
            return false;
        return upper_inclusive ? !(upper < beta) : beta < upper;
    }
};

namespace detail {

template <class Real>
ScaleWindow<Real> make_window(Real lower, Real upper, bool inclusive, Real zeta)
{
    ScaleWindow<Real> w;
    w.lower = lower;
    w.upper = upper;
    w.upper_inclusive = inclusive;
    w.zeta = zeta;
    w.empty = !(lower < upper) || !(Real(0) < upper);
    return w;
}

} // namespace detail

/// Largest zeta either theorem admits.
template <class Real = double>
Real zeta_max()
{
    return Real(1) / Real(14);
}

/**
 * Window of scales guaranteed by the Gromov-Hausdorff reconstruction theorem:
 * d_gh_bound / zeta < beta < delta / (1 + 2 zeta), for 0 < zeta <= 1/14.
 */
template <class Real>
ScaleWindow<Real> gh_window(Real delta, Real d_gh_bound, Real zeta)
{
    if (!(Real(0) < zeta) || zeta_max<Real>() < zeta)
        throw PreconditionError("gh_window: zeta must lie in (0, 1/14]");
    detail::require(Real(0) < delta, "gh_window: delta must be positive");
    detail::require(!(d_gh_bound < Real(0)), "gh_window: distance bound must be non-negative");
    return detail::make_window<Real>(d_gh_bound / zeta, delta / (Real(1) + Real(2) * zeta), false, zeta);
}

inline ScaleWindow<double> gh_window(double delta, double d_gh_bound, double zeta)
{
    return gh_window<double>(delta, d_gh_bound, zeta);
}

/// c(zeta) = 3 (1 + 2 zeta)(1 - 14 zeta) / (8 (1 - 2 zeta)^2), for 0 <= zeta <= 1/14.
template <class Real>
Real h_factor(Real zeta)
{
    if (zeta < Real(0) || zeta_max<Real>() < zeta)
        throw PreconditionError("h_factor: zeta must lie in [0, 1/14]");
    const Real a = Real(1) - Real(2) * zeta;
    return Real(3) * (Real(1) + Real(2) * zeta) * (Real(1) - Real(14) * zeta) / (Real(8) * a * a);
}

/**
 * Window of scales guaranteed by the Hausdorff reconstruction theorem:
 * d_h_bound / zeta < beta <= c(zeta) tau, for 0 < zeta < 1/14.
 *
 * At zeta = 1/14 the theorem grants no scale: c vanishes and the returned
 * window is empty. zeta outside (0, 1/14] is rejected.
 */
template <class Real>
ScaleWindow<Real> h_window(Real tau, Real d_h_bound, Real zeta)
{
    if (!(Real(0) < zeta) || zeta_max<Real>() < zeta)
        throw PreconditionError("h_window: zeta must lie in (0, 1/14)");
    detail::require(Real(0) < tau, "h_window: tau must be positive");
    detail::require(!(d_h_bound < Real(0)), "h_window: distance bound must be non-negative");
    auto w = detail::make_window<Real>(d_h_bound / zeta, h_factor<Real>(zeta) * tau, true, zeta);
    if (zeta == zeta_max<Real>())
        w.empty = true;
    return w;
}

inline ScaleWindow<double> h_window(double tau, double d_h_bound, double zeta)
{
    return h_window<double>(tau, d_h_bound, zeta);
}

/// Geometric midpoint of a non-empty window (upper / 2 when lower is 0).
inline double window_midpoint(const ScaleWindow<double>& w)
{
    detail::require(!w.empty, "window_midpoint: window is empty");
    return w.lower > 0 ? std::sqrt(w.lower * w.upper) : w.upper / 2;
}

// ---------------------------------------------------------------------------
// Reach and distortion
// ---------------------------------------------------------------------------

template <class Real = double>
struct ReachBounds
{
    Real B_norm_bound; ///< |B(u, v)| <= 1 / tau
    Real kappa_lo;     ///< -1 / tau^2
    Real kappa_hi;     ///< 1 / tau^2
    Real rho_lower;    ///< pi tau / 2
    Real delta_lower;  ///< pi tau / 4
};

template <class Real>
ReachBounds<Real> reach_bounds(Real tau)
{
    detail::require(Real(0) < tau, "reach_bounds: tau must be positive");
    const Real pi(std::numbers::pi);
    return {Real(1) / tau, -Real(1) / (tau * tau), Real(1) / (tau * tau), pi * tau / Real(2),
            pi * tau / Real(4)};
}

inline ReachBounds<double> reach_bounds(double tau)
{
    return reach_bounds<double>(tau);
}

/// Chord length below which d_M(p, q) <= xi |p - q|: 2 ((xi - 1) / xi^2) tau, for 1 < xi < 2.
template <class Real>
Real distortion_threshold(Real xi, Real tau)
{
    if (!(Real(1) < xi) || !(xi < Real(2)))
        throw PreconditionError("distortion_threshold: xi must lie in (1, 2)");
    detail::require(Real(0) < tau, "distortion_threshold: tau must be positive");
    return Real(2) * ((xi - Real(1)) / (xi * xi)) * tau;
}

inline double distortion_threshold(double xi, double tau)
{
    return distortion_threshold<double>(xi, tau);
}

/// Upper bound on d_M(p, q) in terms of the chord r = |p - q|: tau - tau sqrt(1 - 2r/tau), r <= tau/2.
template <class Real>
Real chord_geodesic_bound(Real r, Real tau)
{
    using std::sqrt;
    detail::require(Real(0) < tau, "chord_geodesic_bound: tau must be positive");
    detail::require(!(r < Real(0)) && !(Real(2) * r > tau),
                    "chord_geodesic_bound: r must lie in [0, tau / 2]");
    return tau - tau * sqrt(Real(1) - Real(2) * r / tau);
}

/// xi used by the Hausdorff surjectivity construction: 4 (1 - 2 zeta) / (3 (1 + 2 zeta)).
template <class Real>
Real hausdorff_xi(Real zeta)
{
    return Real(4) * (Real(1) - Real(2) * zeta) / (Real(3) * (Real(1) + Real(2) * zeta));
}

struct DistortionReport
{
    std::size_t pairs = 0;
    double xi = 0.0;
    double threshold = 0.0;
    double max_ratio = 0.0;          ///< max d_M / |p - q| over pairs with p != q
    double worst_ratio_excess = 0.0; ///< max of d_M - xi |p - q| (<= 1e-12 to pass)
    double worst_chord_excess = 0.0; ///< max of d_M - d_M^2 / (2 tau) - |p - q| (<= 1e-12 to pass)
    bool pass = true;
};

inline constexpr double kDistortionTolerance = 1e-12;

/**
 * Random pairs with chord length at most the threshold; checks
 * d_M <= xi |p - q| and |p - q| >= d_M - d_M^2 / (2 tau). The first pair has p = q.
 */
inline DistortionReport check_distortion(const ManifoldModel& m, double xi, std::size_t trials,
                                         std::uint64_t seed)
{
    if (!m.has_geodesics() || !m.has_embedding())
        throw UnsupportedError("check_distortion needs geodesic and Euclidean distances; " +
                               to_string(m.kind()) + " lacks one");
    if (!m.constants().tau)
        throw PreconditionError("check_distortion: model has no reach");
    const double tau = m.constants().tau->value;
    DistortionReport r;
    r.xi = xi;
    r.threshold = distortion_threshold(xi, tau);
    r.worst_ratio_excess = -std::numeric_limits<double>::infinity();
    r.worst_chord_excess = -std::numeric_limits<double>::infinity();
    Rng rng(seed);
    const double R = m.primary();
    for (std::size_t t = 0; t < trials; ++t)
    {
        const ChartPoint p = detail::random_point(m, rng);
        ChartPoint q = p;
        if (t > 0)
        {
            // chord uniform in [0, threshold]; geodesic angle from the chord
            const double chord = rng.uniform(0.0, r.threshold);
            const double angle = 2 * std::asin(std::min(1.0, chord / (2 * R)));
            if (m.kind() == ManifoldKind::circle)
            {
                const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
                q = {std::fmod(p[0] + sign * angle + 2 * std::numbers::pi, 2 * std::numbers::pi), 0.0};
            }
            else
            {
                const detail::TangentChart chart(m);
                const double dir = rng.uniform(0.0, 2 * std::numbers::pi);
                Eigen::Vector2d v(std::cos(dir), std::sin(dir));
                q = chart.chart_of(chart.exp(chart.state_of(p), v * (R * angle)));
            }
        }
        const auto ep = m.embed(p), eq = m.embed(q);
        const double e = euclidean_distance(ep, eq);
        const double g = m.geodesic_distance(p, q);
        ++r.pairs;
        r.worst_ratio_excess = std::max(r.worst_ratio_excess, g - xi * e);
        r.worst_chord_excess = std::max(r.worst_chord_excess, g - g * g / (2 * tau) - e);
        if (e > 0)
            r.max_ratio = std::max(r.max_ratio, g / e);
    }
    r.pass = r.worst_ratio_excess <= kDistortionTolerance && r.worst_chord_excess <= kDistortionTolerance;
    return r;
}

/**
 * Reach of an embedded hypersurface estimated from a grid of n (per chart
 * direction) points: the minimum over pairs p != q of |q - p|^2 / (2 |<q - p, n_p>|).
 * The infimum of this quantity over the whole manifold is the reach, so the
 * estimate is never below it and approaches it as the grid is refined.
 */
inline double reach_estimate(const ManifoldModel& m, std::size_t n)
{
    if (!m.has_embedding())
        throw UnsupportedError("reach_estimate needs an embedding; " + to_string(m.kind()) + " has none");
    const auto pts = sample(m, SamplerSpec::grid(n)).points;
    const PointCloud pc = m.embed_all(pts);
    double best = std::numeric_limits<double>::infinity();
    const std::size_t d = pc.dim();
    for (Index i = 0; i < pc.size(); ++i)
    {
        const auto normal = m.unit_normal(pts[i]);
        const auto p = pc[i];
        for (Index j = 0; j < pc.size(); ++j)
        {
            if (i == j)
                continue;
            const auto q = pc[j];
            double sq = 0.0, dot = 0.0;
            for (std::size_t k = 0; k < d; ++k)
            {
                const double v = q[k] - p[k];
                sq += v * v;
                dot += v * normal[k];
            }
            if (sq > 0 && dot != 0)
                best = std::min(best, sq / (2 * std::abs(dot)));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Construction verifiers
// ---------------------------------------------------------------------------

/// A measured inequality lhs < rhs (strict) or lhs <= rhs, with margin rhs - lhs.
struct Inequality
{
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool strict = true;
    double required_margin = 0.0;

    double margin() const { return rhs - lhs; }
    bool holds() const { return strict ? margin() >= required_margin && margin() > 0 : margin() >= -required_margin; }
};

struct VerifierReport
{
    double beta = 0.0;
    double zeta = 0.0;
    double fineness = 0.0; ///< fill radius of the reference net
    std::vector<Inequality> hypotheses;
    std::vector<Inequality> checks;
    std::vector<std::string> failures;

    bool hypotheses_hold() const
    {
        return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Inequality& i) { return i.holds(); });
    }
    bool passed() const
    {
        return failures.empty() && hypotheses_hold() &&
               std::all_of(checks.begin(), checks.end(), [](const Inequality& i) { return i.holds(); });
    }
    double min_margin() const
    {
        double m = std::numeric_limits<double>::infinity();
        for (const auto* v : {&hypotheses, &checks})
            for (const auto& i : *v)
                if (i.strict)
                    m = std::min(m, i.margin());
        return m;
    }
};

/// Slack for non-strict inequalities evaluated in floating point.
inline constexpr double kNonStrictSlack = 1e-9;

namespace detail {

inline void require_zeta_gh(double zeta)
{
    if (!(zeta > 0) || zeta > 1.0 / 14)
        throw PreconditionError("zeta must lie in (0, 1/14] for the Gromov-Hausdorff construction");
}

inline void require_zeta_h(double zeta)
{
    if (!(zeta > 0) || zeta >= 1.0 / 14)
        throw PreconditionError("zeta must lie in (0, 1/14) for the Hausdorff construction");
}

/**
 * Vertex maps net -> S and S -> net drawn from C. Every sample point s gets a
 * net partner chi(s), distinct ones where C allows; phi(chi(s)) = s and
 * otherwise phi(x) is x's lowest-index partner.
 */
struct CorrespondenceMaps
{
    std::vector<Index> phi; ///< net -> sample
    std::vector<Index> chi; ///< sample -> net, (chi(s), s) in C
};

inline CorrespondenceMaps correspondence_maps(const Correspondence& C)
{
    CorrespondenceMaps out;
    out.phi.assign(C.x_size(), 0);
    out.chi.assign(C.y_size(), 0);
    std::vector<std::vector<Index>> partners(C.y_size());
    for (auto [x, y] : C.pairs())
        partners[y].push_back(x);
    std::vector<char> claimed(C.x_size(), 0);
    for (Index s = 0; s < C.y_size(); ++s)
    {
        Index pick = partners[s].front();
        for (Index x : partners[s])
            if (!claimed[x])
            {
                pick = x;
                break;
            }
        out.chi[s] = pick;
        claimed[pick] = 1;
    }
    for (Index x = 0; x < C.x_size(); ++x)
        out.phi[x] = C.first_partner_of_x(x);
    for (Index s = 0; s < C.y_size(); ++s)
        out.phi[out.chi[s]] = s;
    return out;
}

inline Index nearest_net_point(const ManifoldModel& m, const ReferenceNet& net, const ChartPoint& p)
{
    Index best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < net.points.size(); ++i)
    {
        const double d = m.distance(net.points[i], p);
        if (d < bd)
        {
            bd = d;
            best = i;
        }
    }
    return best;
}

inline double max_edge_length(const SimplicialComplex& K, const FiniteMetricSpace& ms,
                              const std::vector<Index>& image)
{
    double worst = 0.0;
    for (std::size_t e = 0; e < K.count(1); ++e)
    {
        auto s = K.simplex(1, e);
        worst = std::max(worst, ms(image[s[0]], image[s[1]]));
    }
    return worst;
}

} // namespace detail

/**
 * Builds g~ : sd K -> R_{(1-2zeta)beta}(net) as in the surjectivity argument
 * for the Gromov-Hausdorff theorem and measures every inequality it relies on.
 *
 * `net` stands in for M; C relates net points (x side) to sample points
 * (y side); g : K -> R_beta(S) with K pure. Circumcenters are computed on the
 * model and then snapped to the nearest net point, so strict inequalities must
 * hold with margin at least 2 * net fineness. Throws PreconditionError for
 * zeta outside (0, 1/14] or K not pure; all other violations are reported.
 */
inline VerifierReport verify_surjectivity_construction(const ManifoldModel& m, const ReferenceNet& net,
                                                       const FiniteMetricSpace& S,
                                                       const Correspondence& C, double beta,
                                                       double zeta, const SimplicialMap& g)
{
    detail::require_zeta_gh(zeta);
    detail::require(beta > 0, "verify_surjectivity_construction: beta must be positive");
    const auto& K = *g.source();
    if (!K.pure_dimension())
        throw PreconditionError("verify_surjectivity_construction: K is not pure");
    if (C.x_size() != net.points.size() || C.y_size() != S.size())
        throw PreconditionError("verify_surjectivity_construction: correspondence does not match net and sample");

    VerifierReport r;
    r.beta = beta;
    r.zeta = zeta;
    r.fineness = net.fill_radius_bound;
    const double slack = 2 * r.fineness;
    const double delta = m.constants().delta.value;
    const double distortion = correspondence_distortion(C, net.metric, S);

    r.hypotheses.push_back({"net fineness <= zeta beta / 10", r.fineness, zeta * beta / 10, false, kNonStrictSlack});
    r.hypotheses.push_back({"dist(C) < 2 zeta beta", distortion, 2 * zeta * beta, true, slack});
    r.hypotheses.push_back({"(1 + 2 zeta) beta < Delta", (1 + 2 * zeta) * beta, delta, true, slack});

    const auto maps = detail::correspondence_maps(C);
    const ComplexPtr L = g.target();

    // g~ on the barycenters: circumcenter of sigma' = chi(g(sigma)), snapped to the net
    const SubdivisionComplex sd(g.source());
    const auto& SD = *sd.complex();
    std::vector<Index> gt(SD.vertices().size());          // net index of g~(v)
    std::vector<ChartPoint> center(SD.vertices().size()); // unsnapped circumcenter
    std::vector<double> sigma_diam(SD.vertices().size());
    double worst_sigma = 0.0, worst_chain_excess = -std::numeric_limits<double>::infinity();
    for (Vertex v : SD.vertices())
    {
        const auto base = sd.base_simplex(v);
        std::vector<Index> sigma;
        std::vector<Index> gs;
        for (Vertex u : base)
        {
            gs.push_back(g(u));
            sigma.push_back(maps.chi[g(u)]);
        }
        std::sort(sigma.begin(), sigma.end());
        sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
        std::vector<ChartPoint> pts;
        for (Index p : sigma)
            pts.push_back(net.points[p]);
        const double dsig = diameter(net.metric, sigma);
        sigma_diam[v] = dsig;
        worst_sigma = std::max(worst_sigma, dsig);
        std::sort(gs.begin(), gs.end());
        gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
        worst_chain_excess = std::max(worst_chain_excess, dsig - (diameter(S, gs) + distortion));

        if (sigma.size() == 1)
        {
            center[v] = pts.front();
            gt[v] = sigma.front();
        }
        else
        {
            const auto c = geodesic_circumcenter(m, pts);
            for (const auto& f : c.flags)
                r.failures.push_back("circumcenter of sd vertex " + std::to_string(v) + ": " + f);
            center[v] = center_chart(c);
            gt[v] = detail::nearest_net_point(m, net, center[v]);
        }
    }
    r.checks.push_back({"diam sigma' <= diam_S g(sigma) + dist(C)", worst_chain_excess, 0.0, false, kNonStrictSlack});
    r.checks.push_back({"diam sigma' < (1 + 2 zeta) beta", worst_sigma, (1 + 2 * zeta) * beta, true, slack});

    // every simplex of sd K is a chain; its image diameter is the max over chain pairs,
    // which are exactly the edges of sd K
    const double worst_sd = detail::max_edge_length(SD, net.metric, gt);
    r.checks.push_back({"diam g~(tau) < (1 - 2 zeta) beta", worst_sd, (1 - 2 * zeta) * beta, true, slack});

    // subset-center step on unsnapped centers: d(Theta(sigma_i'), Theta(sigma_j')) <= (3/4) diam sigma_j'
    double worst_shift = -std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < SD.count(1); ++e)
    {
        auto s = SD.simplex(1, e);
        const Vertex hi = sd.base_simplex(s[0]).size() > sd.base_simplex(s[1]).size() ? s[0] : s[1];
        const Vertex lo = hi == s[0] ? s[1] : s[0];
        worst_shift = std::max(worst_shift, m.geodesic_distance(center[lo], center[hi]) -
                                                kSubsetCenterFactor * sigma_diam[hi]);
    }
    if (SD.count(1) > 0)
        r.checks.push_back({"d(Theta(sigma_i'), Theta(sigma_j')) <= (3/4) diam sigma_j'", worst_shift, 0.0,
                            false, 1e-6});

    // phi o g~ into R_beta(S), conditions (a) and (b)
    VertexMap composite, gmap;
    for (Vertex v : SD.vertices())
        composite[v] = static_cast<Vertex>(maps.phi[gt[v]]);
    double worst_b = 0.0;
    for (int k = 0; k <= K.dimension(); ++k)
        for (std::size_t i = 0; i < K.count(k); ++i)
        {
            auto s = K.simplex(k, i);
            const Vertex bc = sd.vertex_of(s);
            for (Vertex u : s)
                worst_b = std::max(worst_b, S(g(u), composite[bc]));
        }
    r.checks.push_back({"d_S(g(v_j), phi(Theta(sigma_m'))) < beta", worst_b, beta, true, slack});

    auto sd_ptr = sd.complex();
    auto target_net = share(rips_complex(net.metric, (1 - 2 * zeta) * beta, 1));
    VertexMap gt_map;
    for (Vertex v : SD.vertices())
        gt_map[v] = static_cast<Vertex>(gt[v]);
    if (!check_simplicial(gt_map, sd_ptr, target_net).ok())
        r.failures.push_back("g~ is not simplicial into R_{(1-2zeta)beta}(net)");

    const auto gprime = check_simplicial(composite, sd_ptr, L);
    if (!gprime.ok())
        r.failures.push_back("phi o g~ is not simplicial into R_beta(S)");
    else
    {
        const auto hc = check_homotopy_conditions(g, *gprime.map, sd, L);
        if (hc.condition_a_witness)
            r.failures.push_back("condition (a) fails at vertex " + std::to_string(*hc.condition_a_witness));
        if (hc.condition_b_witness)
            r.failures.push_back("condition (b) fails on a simplex of K");
    }
    return r;
}

enum class ChainKind
{
    gromov_hausdorff, ///< target scale (1 + 2 zeta) beta
    hausdorff         ///< target scale (4/3)(1 - 2 zeta) beta
};

/**
 * Checks R_{(1-2zeta)beta}(net) -phi-> R_beta(S) -psi-> R_target(net) and the
 * contiguity of psi o phi with the inclusion. `net` carries d_M, `S` the
 * sample metric; C relates net points to sample points.
 *
 * Hypotheses: for the Gromov-Hausdorff chain dist(C) < 2 zeta beta; for the
 * Hausdorff chain every pair of C is closer than zeta beta in the ambient
 * space (`cross(x, s)`), with beta <= c(zeta) tau.
 */
inline VerifierReport verify_contiguity_chain(const FiniteMetricSpace& net, double fineness,
                                              const FiniteMetricSpace& S, const Correspondence& C,
                                              double beta, double zeta, ChainKind kind,
                                              const std::function<double(Index, Index)>& cross = {},
                                              std::optional<double> tau = std::nullopt)
{
    if (kind == ChainKind::gromov_hausdorff)
        detail::require_zeta_gh(zeta);
    else
        detail::require_zeta_h(zeta);
    detail::require(beta > 0, "verify_contiguity_chain: beta must be positive");
    if (C.x_size() != net.size() || C.y_size() != S.size())
        throw PreconditionError("verify_contiguity_chain: correspondence does not match net and sample");

    VerifierReport r;
    r.beta = beta;
    r.zeta = zeta;
    r.fineness = fineness;
    const double slack = 2 * fineness;
    r.hypotheses.push_back({"net fineness <= zeta beta / 10", fineness, zeta * beta / 10, false, kNonStrictSlack});
    double target = 0.0;
    if (kind == ChainKind::gromov_hausdorff)
    {
        r.hypotheses.push_back({"dist(C) < 2 zeta beta", correspondence_distortion(C, net, S), 2 * zeta * beta,
                                true, slack});
        target = (1 + 2 * zeta) * beta;
    }
    else
    {
        detail::require(static_cast<bool>(cross), "verify_contiguity_chain: Hausdorff chain needs ambient distances");
        detail::require(tau.has_value(), "verify_contiguity_chain: Hausdorff chain needs tau");
        double worst = 0.0;
        for (auto [x, s] : C.pairs())
            worst = std::max(worst, cross(x, s));
        r.hypotheses.push_back({"|p - phi(p)| < zeta beta", worst, zeta * beta, true, slack});
        r.hypotheses.push_back({"beta <= c(zeta) tau", beta, h_factor(zeta) * *tau, false, kNonStrictSlack});
        target = 4.0 / 3.0 * (1 - 2 * zeta) * beta;
    }

    const auto maps = detail::correspondence_maps(C);
    auto K1 = share(rips_complex(net, (1 - 2 * zeta) * beta, 1));
    auto L = share(rips_complex(S, beta, 1));
    auto K3 = share(rips_complex(net, target, 1));

    VertexMap phi, psi, iota;
    for (Index x = 0; x < net.size(); ++x)
    {
        phi[static_cast<Vertex>(x)] = static_cast<Vertex>(maps.phi[x]);
        iota[static_cast<Vertex>(x)] = static_cast<Vertex>(x);
    }
    for (Index s = 0; s < S.size(); ++s)
        psi[static_cast<Vertex>(s)] = static_cast<Vertex>(maps.chi[s]);

    r.checks.push_back({"phi simplicial: d_S(phi(p_i), phi(p_j)) < beta",
                        detail::max_edge_length(*K1, S, maps.phi), beta, true, slack});
    r.checks.push_back({"psi simplicial: d_M(psi(x_i), psi(x_j)) < target scale",
                        detail::max_edge_length(*L, net, maps.chi), target, true, slack});
    double worst_contig = 0.0;
    for (std::size_t e = 0; e < K1->count(1); ++e)
    {
        auto s = K1->simplex(1, e);
        const Index a = maps.chi[maps.phi[s[0]]], b = maps.chi[maps.phi[s[1]]];
        worst_contig = std::max({worst_contig, net(a, s[1]), net(b, s[0]), net(a, b)});
    }
    for (Index x = 0; x < net.size(); ++x)
        worst_contig = std::max(worst_contig, net(maps.chi[maps.phi[x]], x));
    r.checks.push_back({"d_M(psi(phi(p_i)), p_j) < target scale", worst_contig, target, true, slack});

    const auto phi_c = check_simplicial(phi, K1, L);
    const auto psi_c = check_simplicial(psi, L, K3);
    const auto iota_c = check_simplicial(iota, K1, K3);
    if (!phi_c.ok())
        r.failures.push_back("phi is not simplicial");
    if (!psi_c.ok())
        r.failures.push_back("psi is not simplicial");
    if (!iota_c.ok())
        r.failures.push_back("inclusion is not simplicial");
    if (phi_c.ok() && psi_c.ok() && iota_c.ok())
    {
        const auto cont = contiguous(psi_c.map->after(*phi_c.map), *iota_c.map);
        if (!cont.contiguous)
            r.failures.push_back("psi o phi and the inclusion are not contiguous");
    }
    return r;
}

} // namespace ripsrecon
