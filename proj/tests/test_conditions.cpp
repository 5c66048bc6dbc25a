#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <boost/rational.hpp>

#include "ripsrecon/conditions.hpp"

using namespace ripsrecon;
using Catch::Approx;
using Q = boost::rational<long long>;

namespace {

constexpr double pi = std::numbers::pi;

struct CircleInstance
{
    ManifoldModel m = ManifoldModel::circle(1.0);
    Sample s;
    ReferenceNet net;
    FiniteMetricSpace S;
    Correspondence C = Correspondence::identity(1);
};

CircleInstance circle_instance(std::size_t n, double beta, double zeta)
{
    CircleInstance in;
    in.s = sample(in.m, SamplerSpec::grid(n));
    in.net = nested_grid_net(in.m, n, zeta * beta / 10);
    in.S = in.m.geodesic_metric(in.s.points);
    in.C = nn_correspondence(in.net.points.size(), in.s.points.size(), [&](Index i, Index j) {
        return in.m.distance(in.net.points[i], in.s.points[j]);
    });
    return in;
}

SimplicialMap loop_map(std::size_t k, std::size_t n, const FiniteMetricSpace& S, double beta)
{
    auto K = share(cycle_complex(k));
    auto L = share(rips_complex(S, beta, 1));
    VertexMap g;
    for (Vertex i = 0; i < k; ++i)
        g[i] = static_cast<Vertex>((i * n + k / 2) / k % n);
    auto c = check_simplicial(g, K, L);
    REQUIRE(c.ok());
    return *c.map;
}

} // namespace

TEST_CASE("gh window in exact arithmetic")
{
    const auto w = gh_window<Q>(Q(3, 2), Q(1, 20), Q(1, 14));
    CHECK(w.lower == Q(7, 10));
    CHECK(w.upper == Q(21, 16));
    CHECK_FALSE(w.upper_inclusive);
    CHECK_FALSE(w.empty);
    CHECK_FALSE(w.contains(Q(7, 10)));
    CHECK(w.contains(Q(1)));
    CHECK_FALSE(w.contains(Q(21, 16)));

    const auto zero = gh_window<Q>(Q(3, 2), Q(0), Q(1, 14));
    CHECK(zero.lower == Q(0));
    CHECK_FALSE(zero.empty);

    const auto crossed = gh_window<Q>(Q(3, 2), Q(1, 10), Q(1, 14));
    CHECK(crossed.empty);

    CHECK_THROWS_AS(gh_window<Q>(Q(1), Q(0), Q(0)), PreconditionError);
    CHECK_THROWS_AS(gh_window<Q>(Q(1), Q(0), Q(1, 13)), PreconditionError);
    CHECK_THROWS_AS(gh_window<Q>(Q(1), Q(0), Q(-1, 14)), PreconditionError);
}

TEST_CASE("gh window on the circle instance")
{
    const auto w = gh_window(pi / 2, pi / 50, 1.0 / 14);
    CHECK(w.lower == Approx(14 * pi / 50));
    CHECK(w.upper == Approx(7 * pi / 16));
    CHECK(w.contains(1.0));
}

TEST_CASE("h window in exact arithmetic")
{
    CHECK(h_factor<Q>(Q(1, 28)) == Q(2205, 9464));
    const auto w = h_window<Q>(Q(1), Q(0), Q(1, 28));
    CHECK(w.upper == Q(2205, 9464));
    CHECK(w.upper_inclusive);
    CHECK(w.contains(Q(2205, 9464)));
    CHECK(h_factor<Q>(Q(0)) == Q(3, 8));
    CHECK(h_factor<Q>(Q(1, 14)) == Q(0));

    // zeta = 1/14: empty for every d, including d = 0
    for (const Q d : {Q(0), Q(1, 1000000), Q(1, 10), Q(5)})
        CHECK(h_window<Q>(Q(1), d, Q(1, 14)).empty);

    CHECK_THROWS_AS(h_window<Q>(Q(1), Q(0), Q(0)), PreconditionError);
    CHECK_THROWS_AS(h_window<Q>(Q(1), Q(0), Q(1, 10)), PreconditionError);
    CHECK_THROWS_AS(h_window<Q>(Q(0), Q(0), Q(1, 28)), PreconditionError);

    // upper bound of the window decreases towards 0 as zeta -> 1/14
    Q prev = h_factor<Q>(Q(0));
    for (long long k = 1; k <= 100; ++k)
    {
        const Q c = h_factor<Q>(Q(k, 1400));
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("reach bounds")
{
    const auto one = reach_bounds(1.0);
    CHECK(one.B_norm_bound == 1.0);
    CHECK(one.kappa_lo == -1.0);
    CHECK(one.kappa_hi == 1.0);
    CHECK(one.rho_lower == Approx(pi / 2));
    CHECK(one.delta_lower == Approx(pi / 4));
    const auto two = reach_bounds(2.0);
    CHECK(two.B_norm_bound == 0.5);
    CHECK(two.kappa_hi == 0.25);
    CHECK(two.rho_lower == Approx(pi));
    CHECK(two.delta_lower == Approx(pi / 2));
    CHECK_THROWS_AS(reach_bounds(0.0), PreconditionError);

    const auto s = ManifoldModel::sphere2(1).constants();
    CHECK(s.kappa_sup->value <= one.kappa_hi);
    CHECK(s.kappa_sup->value >= one.kappa_lo);
    CHECK(s.rho.value == Approx(one.rho_lower));
}

TEST_CASE("distortion threshold and chord bound")
{
    CHECK(distortion_threshold<Q>(Q(4, 3), Q(1)) == Q(3, 8));
    CHECK(distortion_threshold(1.0 + 1e-9, 1.0) < 1e-8);
    CHECK_THROWS_AS(distortion_threshold(2.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(distortion_threshold(1.0, 1.0), PreconditionError);

    // f(r) / r is increasing and reaches xi at the threshold
    for (double xi : {1.1, 4.0 / 3.0, 1.9})
    {
        const double t = distortion_threshold(xi, 1.0);
        CHECK(chord_geodesic_bound(t, 1.0) / t == Approx(xi).epsilon(1e-12));
        double prev = 0.0;
        for (int i = 1; i <= 1000; ++i)
        {
            const double r = t * i / 1000;
            const double q = chord_geodesic_bound(r, 1.0) / r;
            CHECK(q > prev);
            prev = q;
        }
    }

    // circle, xi = 4/3: chord 3/8 spans angle 2 asin(3/16)
    const double theta = 2 * std::asin(3.0 / 16);
    CHECK(theta == Approx(0.377233).margin(1e-6));
    CHECK(theta <= 0.5);
    CHECK(hausdorff_xi<Q>(Q(1, 28)) == Q(4 * 13, 3 * 15));
}

TEST_CASE("distortion campaigns")
{
    for (const auto& m : {ManifoldModel::circle(1), ManifoldModel::sphere2(1), ManifoldModel::circle(2.5)})
        for (double xi : {1.1, 4.0 / 3.0, 1.9})
        {
            const auto r = check_distortion(m, xi, 3000, 12);
            CHECK(r.pass);
            CHECK(r.max_ratio <= xi);
        }
    CHECK_THROWS_AS(check_distortion(ManifoldModel::flat_torus(1), 1.5, 10, 1), UnsupportedError);
}

TEST_CASE("surjectivity construction on the circle instance")
{
    const double beta = 1.0, zeta = 1.0 / 14;
    const auto in = circle_instance(50, beta, zeta);
    for (std::size_t k : {50u, 25u, 8u})
    {
        const auto g = loop_map(k, 50, in.S, beta);
        const auto r = verify_surjectivity_construction(in.m, in.net, in.S, in.C, beta, zeta, g);
        INFO("k = " << k);
        CHECK(r.hypotheses_hold());
        CHECK(r.passed());
        CHECK(r.min_margin() >= 2 * in.net.fill_radius_bound);
    }
}

TEST_CASE("surjectivity construction with a constant map")
{
    const double beta = 1.0, zeta = 1.0 / 14;
    const auto in = circle_instance(50, beta, zeta);
    auto K = share(cycle_complex(6));
    auto L = share(rips_complex(in.S, beta, 1));
    VertexMap g;
    for (Vertex i = 0; i < 6; ++i)
        g[i] = 17;
    const auto gm = *check_simplicial(g, K, L).map;
    CHECK(verify_surjectivity_construction(in.m, in.net, in.S, in.C, beta, zeta, gm).passed());
    CHECK_THROWS_AS(verify_surjectivity_construction(in.m, in.net, in.S, in.C, beta, 0.25, gm), PreconditionError);
}

TEST_CASE("contiguity chain")
{
    const double beta = 1.0, zeta = 1.0 / 14;
    const auto in = circle_instance(50, beta, zeta);
    const auto r = verify_contiguity_chain(in.net.metric, in.net.fill_radius_bound, in.S, in.C, beta, zeta,
                                           ChainKind::gromov_hausdorff);
    CHECK(r.passed());
    CHECK(r.failures.empty());
    CHECK(r.min_margin() >= 2 * in.net.fill_radius_bound);

    // S = net, C = identity
    const auto self = verify_contiguity_chain(in.S, 0.0, in.S, Correspondence::identity(in.S.size()), beta, zeta,
                                              ChainKind::gromov_hausdorff);
    CHECK(self.failures.empty());
    for (const auto& c : self.checks)
        CHECK(c.holds());

    CHECK_THROWS_AS(verify_contiguity_chain(in.net.metric, in.net.fill_radius_bound, in.S, in.C, beta, 0.25,
                                            ChainKind::gromov_hausdorff),
                    PreconditionError);
}

TEST_CASE("hausdorff contiguity chain on a jittered circle")
{
    // Relaxed net fineness (about twice zeta beta / 10) to keep
    // the dense net matrix small; every other hypothesis and every check must hold.
    const auto m = ManifoldModel::circle(1.0);
    const double zeta = 1.0 / 28, beta = 0.2, eta = 0.001;
    const auto s = sample(m, SamplerSpec::grid(2000));
    const PointCloud cloud = perturb(m.embed_all(s.points), eta, 3);
    const auto S = euclidean_metric(cloud);
    const auto net = nested_grid_net(m, 2000, 0.0016);
    const PointCloud net_cloud = m.embed_all(net.points);
    auto cross = [&](Index x, Index j) { return euclidean_distance(net_cloud[x], cloud[j]); };
    const auto C = nn_correspondence(net.points.size(), cloud.size(), cross);
    const auto r = verify_contiguity_chain(net.metric, net.fill_radius_bound, S, C, beta, zeta, ChainKind::hausdorff,
                                           cross, 1.0);
    CHECK(r.failures.empty());
    for (const auto& c : r.checks)
    {
        INFO(c.name << ": " << c.lhs << " vs " << c.rhs);
        CHECK(c.holds());
    }
    for (const auto& h : r.hypotheses)
        if (h.name != "net fineness <= zeta beta / 10")
        {
            INFO(h.name);
            CHECK(h.holds());
        }
    CHECK_THROWS_AS(verify_contiguity_chain(net.metric, net.fill_radius_bound, S, C, beta, 1.0 / 14,
                                            ChainKind::hausdorff, cross, 1.0),
                    PreconditionError);
}
