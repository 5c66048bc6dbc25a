#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ripsrecon/jung.hpp"

using namespace ripsrecon;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Smallest cap on the unit sphere containing the points: maximise min_i <c, p_i>
// over unit c. The optimum is supported by at most three points, so trying
// every 1-, 2- and 3-point support is exhaustive.
double sphere_circumradius_oracle(const std::vector<Vec3>& p)
{
    double best = -2.0;
    auto consider = [&](Vec3 c) {
        const double n = std::sqrt(dot(c, c));
        if (n < 1e-14)
            return;
        for (auto& x : c)
            x /= n;
        double worst = 2.0;
        for (const auto& q : p)
            worst = std::min(worst, dot(c, q));
        best = std::max(best, worst);
    };
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        consider(p[i]);
        for (std::size_t j = i + 1; j < p.size(); ++j)
        {
            consider({p[i][0] + p[j][0], p[i][1] + p[j][1], p[i][2] + p[j][2]});
            for (std::size_t k = j + 1; k < p.size(); ++k)
            {
                const Vec3 u{p[j][0] - p[i][0], p[j][1] - p[i][1], p[j][2] - p[i][2]};
                const Vec3 v{p[k][0] - p[i][0], p[k][1] - p[i][1], p[k][2] - p[i][2]};
                Vec3 c{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
                if (dot(c, p[i]) < 0)
                    c = {-c[0], -c[1], -c[2]};
                consider(c);
            }
        }
    }
    return std::acos(std::clamp(best, -1.0, 1.0));
}

} // namespace

TEST_CASE("euclidean circumcenters")
{
    PointCloud one(2);
    one.push_back({0.3, -1.0});
    auto r = euclidean_circumcenter(one);
    CHECK(r.radius == 0.0);
    CHECK(r.center == std::vector<double>{0.3, -1.0});

    PointCloud two(3);
    two.push_back({0, 0, 0});
    two.push_back({2, 0, 0});
    r = euclidean_circumcenter(two);
    CHECK(r.radius == Approx(1.0));
    CHECK(r.center[0] == Approx(1.0));

    PointCloud tri(2);
    tri.push_back({0, 0});
    tri.push_back({1, 0});
    tri.push_back({0.5, std::sqrt(3.0) / 2});
    r = euclidean_circumcenter(tri);
    CHECK(r.radius == Approx(1 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(r.center[0] == Approx(0.5));
    CHECK(r.center[1] == Approx(std::sqrt(3.0) / 6));
    const auto b = check_circum_bound(tri);
    CHECK(b.ratio == Approx(std::sqrt(3.0)));
    CHECK(b.pass);
}

TEST_CASE("euclidean circumcenter agrees with the pair/triple oracle")
{
    // In the plane the smallest enclosing circle is the diametral circle of a
    // pair or the circumcircle of a triple; take the smallest one containing all.
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial)
    {
        PointCloud pc(2);
        const std::size_t n = 2 + rng.index(8);
        for (std::size_t i = 0; i < n; ++i)
            pc.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
        double best = 1e300;
        auto consider = [&](double cx, double cy) {
            double w = 0;
            for (Index i = 0; i < pc.size(); ++i)
                w = std::max(w, std::hypot(pc[i][0] - cx, pc[i][1] - cy));
            best = std::min(best, w);
        };
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j)
            {
                consider((pc[i][0] + pc[j][0]) / 2, (pc[i][1] + pc[j][1]) / 2);
                for (Index k = j + 1; k < n; ++k)
                {
                    const double ax = pc[i][0], ay = pc[i][1], bx = pc[j][0], by = pc[j][1];
                    const double cx = pc[k][0], cy = pc[k][1];
                    const double D = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
                    if (std::abs(D) < 1e-12)
                        continue;
                    const double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
                    consider((a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / D,
                             (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / D);
                }
            }
        CHECK(euclidean_circumcenter(pc).radius == Approx(best).margin(1e-10));
    }
}

TEST_CASE("euclidean circumcenter in higher dimension")
{
    // regular simplex in R^5: circumradius side * sqrt(n / (2 (n + 1)))
    const std::size_t n = 5;
    PointCloud pc(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        pc.push_back(e);
    }
    std::vector<double> last(n, (1 - std::sqrt(n + 1.0)) / n);
    pc.push_back(last);
    const double side = std::sqrt(2.0);
    const auto r = euclidean_circumcenter(pc);
    CHECK(r.radius == Approx(side * std::sqrt(n / (2.0 * (n + 1)))).epsilon(1e-12));
}

TEST_CASE("geodesic circumcenters")
{
    const auto s = ManifoldModel::sphere2(1);
    std::vector<ChartPoint> pts{{0.5, 0.2}, {0.9, 0.2}};
    auto r = geodesic_circumcenter(s, pts);
    CHECK(r.radius == Approx(0.2).epsilon(1e-9));
    CHECK(r.center[0] == Approx(0.7).epsilon(1e-9));

    pts = {{0.1, 0.0}, {0.1, 2 * pi / 3}, {0.1, 4 * pi / 3}};
    r = geodesic_circumcenter(s, pts);
    CHECK(r.radius == Approx(0.1).epsilon(1e-9));
    CHECK(r.center[0] == Approx(0.0).margin(1e-7));

    pts = {{1.0, 1.0}};
    r = geodesic_circumcenter(s, pts);
    CHECK(r.radius == Approx(0.0).margin(1e-12));
}

TEST_CASE("sphere circumradius matches the support-subset oracle")
{
    const auto s = ManifoldModel::sphere2(1);
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial)
    {
        const auto pts = random_cluster(s, 2 + rng.index(9), rng.uniform(0.05, 0.7), rng);
        std::vector<Vec3> emb;
        for (const auto& p : pts)
            emb.push_back(ManifoldModel::unit_sphere(p));
        const auto r = geodesic_circumcenter(s, pts, static_cast<std::uint64_t>(trial));
        CHECK(r.radius == Approx(sphere_circumradius_oracle(emb)).margin(1e-8));
    }
}

TEST_CASE("flat torus circumcenter agrees with the euclidean one")
{
    const auto t = ManifoldModel::flat_torus(2 * pi);
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial)
    {
        const double cx = rng.uniform(1.5, 4.5), cy = rng.uniform(1.5, 4.5);
        std::vector<ChartPoint> pts;
        PointCloud pc(2);
        for (std::size_t i = 0, n = 2 + rng.index(8); i < n; ++i)
        {
            const ChartPoint p{cx + rng.uniform(-0.6, 0.6), cy + rng.uniform(-0.6, 0.6)};
            pts.push_back(p);
            pc.push_back({p[0], p[1]});
        }
        CHECK(geodesic_circumcenter(t, pts).radius == Approx(euclidean_circumcenter(pc).radius).margin(1e-7));
    }
}

TEST_CASE("jung minimal diameter")
{
    CHECK(jung_min_diam(1.0, 2, 0.0) == Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(jung_min_diam(1.0, 1, 0.0) == Approx(2.0));
    CHECK(jung_min_diam(pi / 4, 2, 1.0) == Approx(1.318116).margin(1e-6));
    CHECK(jung_J(pi / 4, 1.0, 2) == jung_min_diam(pi / 4, 2, 1.0));
    CHECK(jung_min_diam(0.5, 3, -1.0) > 0.0);
    CHECK_THROWS_AS(jung_min_diam(2.0, 2, 1.0), PreconditionError);
    CHECK_THROWS_AS(jung_J(1.0, 1.0, 2), PreconditionError);

    // high-precision cross-check
    using mp = boost::multiprecision::cpp_bin_float_50;
    const mp hp = jung_min_diam<mp>(mp(boost::math::constants::pi<mp>() / 4), 2, mp(1));
    CHECK(std::abs(static_cast<double>(hp) - jung_min_diam(pi / 4, 2, 1.0)) < 1e-15);
    CHECK(static_cast<double>(hp) == Approx(1.318116).margin(5e-7));
}

TEST_CASE("J(r)/r limits")
{
    for (int n : {2, 3, 5, 50})
    {
        CHECK(jung_J(pi / 4, 1.0, n) / (pi / 4) >= 4.0 / 3.0);
        CHECK(jung_J(1e-6, 1.0, n) / 1e-6 == Approx(2 * std::sqrt((n + 1.0) / (2.0 * n))).margin(1e-4));
    }
    // the n -> infinity value at r = pi/4 is exactly 4/3
    CHECK(jung_J(pi / 4, 1.0, 1'000'000) / (pi / 4) == Approx(4.0 / 3.0).margin(1e-6));
}

TEST_CASE("circumradius and subset-center campaigns")
{
    for (const auto& m : {ManifoldModel::sphere2(1), ManifoldModel::circle(1), ManifoldModel::flat_torus(2 * pi)})
    {
        const auto c = circumradius_campaign(m, 200, 5);
        CHECK(c.pass());
        CHECK(c.skipped < c.trials);
        CHECK(subset_center_campaign(m, 200, 6).pass());
    }
}

TEST_CASE("subset centers")
{
    const auto s = ManifoldModel::sphere2(1);
    const std::vector<ChartPoint> A{{0.3, 0.1}, {0.5, 0.4}, {0.45, 1.0}, {0.2, 2.0}};
    const std::vector<Index> all{0, 1, 2, 3};
    CHECK(check_subset_center(s, A, all).distance == Approx(0.0).margin(1e-8));
    for (Index i = 0; i < A.size(); ++i)
    {
        const std::vector<Index> one{i};
        const auto r = check_subset_center(s, A, one);
        CHECK(r.pass);
        CHECK(r.distance <= geodesic_circumcenter(s, A).radius + 1e-8);
    }
    const std::vector<Index> bad{7};
    CHECK_THROWS_AS(check_subset_center(s, A, bad), PreconditionError);
}
