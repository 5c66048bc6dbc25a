// Acceptance runner: one line per criterion, "PASS"/"FAIL" plus measurements.
// Usage: acceptance [--criterion N]

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/rational.hpp>

#include "oracles.hpp"
#include "ripsrecon/ripsrecon.hpp"

using namespace ripsrecon;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome
{
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok)
        {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string betti_string(const std::vector<std::size_t>& b)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < b.size(); ++i)
        os << (i ? "," : "") << b[i];
    os << ')';
    return os.str();
}

void run_reconstruction(Outcome& o, const std::string& config, const std::vector<std::size_t>& expected,
                        double time_limit)
{
    const auto c = parse_config(config);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = cmd_verify(c);
    const double secs = seconds_since(t0);
    o.detail << "beta=" << (r.beta ? *r.beta : 0.0) << " betti=" << betti_string(r.betti.betti)
             << " expected=" << betti_string(expected) << " in_window=" << (r.in_window ? "yes" : "no")
             << " time=" << secs << "s";
    o.require(r.betti.exact(), "Betti numbers exact");
    o.require(r.betti.betti == expected, "Betti numbers");
    o.require(secs < time_limit, "runtime");
}

// 1. circle, 50 grid points, zeta = 1/14, beta = 1 inside the window
void criterion1(Outcome& o)
{
    const auto w = gh_window(pi / 2, pi / 50, 1.0 / 14);
    o.detail << "window=(" << w.lower << ", " << w.upper << ") ";
    o.require(w.contains(1.0), "beta = 1 inside the window");
    run_reconstruction(o, R"({"schema": 1, "model": {"kind": "circle", "R": 1},
                              "sampler": {"type": "grid", "n": 50}, "zeta": "1/14", "beta": 1.0})",
                       {1, 1, 0}, 1.0);
}

// 2. sphere, 400 seeded random points, jitter 0.01, beta = 0.45
void criterion2(Outcome& o)
{
    run_reconstruction(o, R"({"schema": 1, "model": {"kind": "sphere2", "R": 1},
                              "sampler": {"type": "random", "n": 400, "seed": 7},
                              "noise": {"eta": 0.01}, "beta": 0.45})",
                       {1, 0, 1}, 120.0);
}

// 3. flat torus 20 x 20 grid, beta = 0.7
void criterion3(Outcome& o)
{
    run_reconstruction(o, R"({"schema": 1, "model": {"kind": "flat_torus", "L": 6.283185307179586},
                              "sampler": {"type": "grid", "n": 20}, "beta": 0.7})",
                       {1, 2, 1}, 300.0);
}

// 4. circumradius bound on the sphere; Euclidean equilateral families meet Jung with equality
void criterion4(Outcome& o)
{
    const auto m = ManifoldModel::sphere2(1);
    const auto r = circumradius_campaign(m, 1000, 1);
    o.detail << "trials=" << r.trials << " skipped=" << r.skipped << " failures=" << r.failures
             << " worst_excess=" << r.worst;
    o.require(r.pass() && r.skipped == 0, "sphere campaign");

    double worst = 0.0;
    for (std::size_t n = 1; n <= 6; ++n)
        for (double side : {0.1, 1.0, 7.5})
        {
            // regular n-simplex: e_1..e_n and (1 - sqrt(n + 1)) / n * (1, ..., 1), scaled
            PointCloud pc(n);
            const double scale = side / std::sqrt(2.0);
            for (std::size_t i = 0; i < n; ++i)
            {
                std::vector<double> e(n, 0.0);
                e[i] = scale;
                pc.push_back(e);
            }
            pc.push_back(std::vector<double>(n, scale * (1 - std::sqrt(n + 1.0)) / static_cast<double>(n)));
            const auto c = euclidean_circumcenter(pc);
            worst = std::max(worst, std::abs(jung_min_diam(c.radius, static_cast<int>(n), 0.0) - side));
        }
    o.detail << " equilateral_max_gap=" << worst;
    o.require(worst <= 1e-9, "equilateral equality");
}

// 5. subset circumcenters on the sphere
void criterion5(Outcome& o)
{
    const auto r = subset_center_campaign(ManifoldModel::sphere2(1), 500, 1);
    o.detail << "trials=" << r.trials << " skipped=" << r.skipped << " failures=" << r.failures
             << " worst_excess=" << r.worst;
    o.require(r.pass() && r.skipped == 0, "subset-center campaign");
}

// 6. distortion on circle and sphere
void criterion6(Outcome& o)
{
    std::uint64_t seed = 1;
    for (const auto& m : {ManifoldModel::circle(1), ManifoldModel::sphere2(1)})
        for (double xi : {1.1, 4.0 / 3.0, 1.9})
        {
            const auto r = check_distortion(m, xi, 10'000, seed++);
            o.detail << to_string(m.kind()) << "/xi=" << xi << ": max_ratio=" << r.max_ratio << " ";
            o.require(r.pass && r.pairs == 10'000, to_string(m.kind()) + " xi " + std::to_string(xi));
        }
}

// 7. J(r)/r decreasing and >= 4/3; f(r)/r increasing up to xi
void criterion7(Outcome& o)
{
    constexpr int grid = 1000;
    double min_ratio = 1e300;
    for (double kappa : {0.5, 1.0, 4.0})
        for (int n : {2, 3, 5})
        {
            const double top = pi / (4 * std::sqrt(kappa));
            double prev = 1e300;
            bool decreasing = true;
            for (int i = 1; i <= grid; ++i)
            {
                const double r = top * i / (grid + 1);
                const double q = jung_J(r, kappa, n) / r;
                decreasing = decreasing && q < prev;
                min_ratio = std::min(min_ratio, q);
                prev = q;
            }
            o.require(decreasing, "J(r)/r decreasing for kappa " + std::to_string(kappa) + ", n " + std::to_string(n));
        }
    o.detail << "min J(r)/r=" << min_ratio;
    o.require(min_ratio >= 4.0 / 3.0, "J(r)/r >= 4/3");

    double worst_gap = 0.0;
    for (double xi : {1.1, 4.0 / 3.0, 1.5, 1.9})
    {
        const double t = distortion_threshold(xi, 1.0);
        double prev = 0.0;
        bool increasing = true;
        for (int i = 1; i <= grid; ++i)
        {
            const double r = t * i / grid;
            const double q = chord_geodesic_bound(r, 1.0) / r;
            increasing = increasing && q > prev;
            prev = q;
        }
        worst_gap = std::max(worst_gap, std::abs(prev - xi));
        o.require(increasing, "f(r)/r increasing for xi " + std::to_string(xi));
    }
    o.detail << " max |f(t)/t - xi|=" << worst_gap;
    o.require(worst_gap <= 1e-9, "f(r)/r reaches xi at the threshold");
}

// 8. construction verifiers on the criterion 1 instance
void criterion8(Outcome& o)
{
    const auto m = ManifoldModel::circle(1);
    const double beta = 1.0, zeta = 1.0 / 14;
    const auto s = sample(m, SamplerSpec::grid(50));
    const auto net = nested_grid_net(m, 50, zeta * beta / 10);
    const auto S = m.geodesic_metric(s.points);
    const auto C = nn_correspondence(net.points.size(), s.points.size(),
                                     [&](Index i, Index j) { return m.distance(net.points[i], s.points[j]); });
    const double need = 2 * net.fill_radius_bound;

    auto K = share(cycle_complex(50));
    auto L = share(rips_complex(S, beta, 1));
    VertexMap g;
    for (Vertex i = 0; i < 50; ++i)
        g[i] = i;
    const auto gm = check_simplicial(g, K, L);
    o.require(gm.ok(), "loop map simplicial");
    if (!gm.ok())
        return;
    const auto sur = verify_surjectivity_construction(m, net, S, C, beta, zeta, *gm.map);
    const auto chain = verify_contiguity_chain(net.metric, net.fill_radius_bound, S, C, beta, zeta,
                                               ChainKind::gromov_hausdorff);
    o.detail << "net=" << net.points.size() << " fineness=" << net.fill_radius_bound
             << " surjectivity_min_margin=" << sur.min_margin() << " chain_min_margin=" << chain.min_margin();
    o.require(sur.passed(), "surjectivity construction");
    o.require(chain.passed(), "contiguity chain");
    o.require(sur.min_margin() >= need && chain.min_margin() >= need, "margins >= 2 x fineness");
}

// 9. sparse GF(2) reduction against dense rank-nullity
void criterion9(Outcome& o)
{
    Rng rng(9);
    std::size_t mismatches = 0, simplices = 0;
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto K = testing::random_complex(rng, 8);
        simplices += K.size();
        if (betti_numbers(K, K.dimension()).betti != testing::dense_betti(K, K.dimension()))
            ++mismatches;
    }
    o.detail << "complexes=200 simplices=" << simplices << " mismatches=" << mismatches;
    o.require(mismatches == 0, "exact match");
}

// 10. window edge cases in exact arithmetic
void criterion10(Outcome& o)
{
    using Q = boost::rational<long long>;
    const Q z14(1, 14);
    bool h_empty = true;
    for (const Q d : {Q(1, 1000000), Q(1, 100), Q(1, 3), Q(2)})
        h_empty = h_empty && h_window<Q>(Q(1), d, z14).empty;
    o.require(h_empty, "h window empty at zeta = 1/14");

    const auto gh = gh_window<Q>(Q(3, 2), Q(1, 20), z14);
    o.require(!gh.empty && gh.lower == Q(7, 10) && gh.upper == Q(21, 16), "gh window accepts zeta = 1/14");

    auto throws = [](const std::function<void()>& f) {
        try
        {
            f();
        }
        catch (const PreconditionError&)
        {
            return true;
        }
        return false;
    };
    o.require(throws([&] { gh_window<Q>(Q(1), Q(0), Q(0)); }), "gh rejects zeta = 0");
    o.require(throws([&] { gh_window<Q>(Q(1), Q(0), Q(1, 13)); }), "gh rejects zeta > 1/14");
    o.require(throws([&] { h_window<Q>(Q(1), Q(0), Q(0)); }), "h rejects zeta = 0");
    o.require(throws([&] { h_window<Q>(Q(1), Q(0), Q(1, 13)); }), "h rejects zeta > 1/14");
    o.require(h_window<Q>(Q(1), Q(0), Q(1, 28)).upper == Q(2205, 9464), "h upper at zeta = 1/28");
    o.detail << "h(1/28).upper=" << h_window<Q>(Q(1), Q(0), Q(1, 28)).upper << " gh(1/14)=(" << gh.lower << ", "
             << gh.upper << ")";
}

struct Criterion
{
    const char* title;
    void (*run)(Outcome&);
};

const Criterion kCriteria[] = {
    {"circle reconstruction inside the window", criterion1},
    {"sphere reconstruction, jittered random sample", criterion2},
    {"flat torus reconstruction", criterion3},
    {"circumradius bound", criterion4},
    {"subset circumcenters", criterion5},
    {"distortion bounds", criterion6},
    {"J(r)/r and f(r)/r", criterion7},
    {"construction verifiers", criterion8},
    {"homology oracle", criterion9},
    {"window edge cases", criterion10},
};

} // namespace

int main(int argc, char** argv)
{
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
    if (only < 0 || only > 10)
    {
        std::cerr << "criterion must be 1..10\n";
        return 2;
    }
    int failed = 0;
    for (int k = 1; k <= 10; ++k)
    {
        if (only && k != only)
            continue;
        Outcome o;
        try
        {
            kCriteria[k - 1].run(o);
        }
        catch (const std::exception& e)
        {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        std::cout << "criterion " << k << " " << (o.pass ? "PASS" : "FAIL") << ": " << kCriteria[k - 1].title
                  << " | " << o.detail.str() << std::endl;
        failed += o.pass ? 0 : 1;
    }
    return failed ? 1 : 0;
}
