#include <catch_amalgamated.hpp>

#include <sstream>

#include "ripsrecon/experiment.hpp"

using namespace ripsrecon;

namespace {

ExperimentConfig cfg(const std::string& text)
{
    return parse_config(text);
}

std::vector<std::string> split_lines(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line))
        out.push_back(line);
    return out;
}

const CertifyEntry& entry(const CertifyBundle& b, const std::string& name)
{
    for (const auto& e : b.entries)
        if (e.name == name)
            return e;
    FAIL("no entry " << name);
    return b.entries.front();
}

} // namespace

TEST_CASE("config parsing")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "sphere2", "R": 2},
                          "sampler": {"type": "random", "n": 30, "seed": 4},
                          "noise": {"eta": 0.01}, "zeta": "1/28", "beta": 0.5, "max_dim": 3, "pipeline": "h"})");
    CHECK(c.model.kind() == ManifoldKind::sphere2);
    CHECK(c.model.primary() == 2.0);
    CHECK(c.sampler.type == SamplerSpec::Type::random);
    CHECK(c.sampler.seed == 4);
    CHECK(c.noise_seed == 4);
    CHECK(c.eta == 0.01);
    CHECK(*c.zeta == 1.0 / 28);
    CHECK(*c.beta == 0.5);
    CHECK(c.max_dim == 3);
    CHECK(c.pipeline == Pipeline::h);

    const auto d = cfg(R"({"schema": 1, "model": {"kind": "circle"}, "beta": "midpoint"})");
    CHECK_FALSE(d.beta.has_value());
    CHECK_FALSE(d.zeta.has_value());

    CHECK_THROWS_AS(cfg(R"({"model": {"kind": "circle"}})"), InputError);
    CHECK_THROWS_AS(cfg(R"({"schema": 2, "model": {"kind": "circle"}})"), InputError);
    CHECK_THROWS_AS(cfg(R"({"schema": 1, "model": {"kind": "klein"}})"), InputError);
    CHECK_THROWS_AS(cfg(R"({"schema": 1, "model": {"kind": "circle"}, "sampler": {"type": "random", "n": 5}})"),
                    InputError);
    CHECK_THROWS_AS(cfg(R"({"schema": 1, "model": {"kind": "circle"}, "zeta": "one"})"), InputError);
    CHECK_THROWS_AS(cfg(R"({"schema": 1, "model": {"kind": "circle"}, "max_dim": "two"})"), InputError);
    CHECK_THROWS_AS(cfg(R"({"schema": 1, "model": {"kind": "circle"}, "pipeline": 3})"), InputError);
    CHECK_THROWS_AS(cfg("{not json"), InputError);
}

TEST_CASE("model overrides recompute delta")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "sphere2", "kappa_sup": 4}})");
    CHECK(c.model.constants().delta.value == Catch::Approx(std::numbers::pi / 8));
    CHECK(c.model.constants().kappa_sup->provenance == Provenance::derived_bound);
}

TEST_CASE("verify on the circle instance")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "circle"}, "sampler": {"type": "grid", "n": 50},
                          "zeta": "1/14", "beta": 1.0})");
    const auto r = cmd_verify(c);
    CHECK(r.pass);
    CHECK(r.in_window);
    CHECK(r.flags.empty());
    CHECK(r.betti.betti == std::vector<std::size_t>{1, 1, 0});
    CHECK(r.exit_code() == 0);
    CHECK(r.counts.size() == 4);
    // byte-identical report
    CHECK(to_json(r, c).dump() == to_json(cmd_verify(c), c).dump());
}

TEST_CASE("verify picks the window midpoint")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "circle"}, "sampler": {"type": "grid", "n": 100}})");
    const auto r = cmd_verify(c);
    REQUIRE(r.beta.has_value());
    CHECK(r.beta_policy == "midpoint");
    CHECK(*r.beta == Catch::Approx(std::sqrt(r.window->lower * r.window->upper)));
    CHECK(r.pass);
}

TEST_CASE("verify reports an empty window")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "circle"}, "sampler": {"type": "grid", "n": 4}, "zeta": "1/14"})");
    const auto r = cmd_verify(c);
    CHECK_FALSE(r.pass);
    REQUIRE(r.failure.has_value());
    CHECK(*r.failure == kNoScaleFailure);
    CHECK(r.exit_code() == 2);
    CHECK(to_json(r, c)["failure"] == kNoScaleFailure);
}

TEST_CASE("verify outside the window is flagged")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "flat_torus"}, "sampler": {"type": "grid", "n": 20}, "beta": 0.7})");
    const auto r = cmd_verify(c);
    CHECK(r.pipeline == Pipeline::gh);
    CHECK_FALSE(r.in_window);
    CHECK(std::find(r.flags.begin(), r.flags.end(), kEmpiricalFlag) != r.flags.end());
    CHECK(r.betti.betti == std::vector<std::size_t>{1, 2, 1});
}

TEST_CASE("pipeline selection")
{
    CHECK(cmd_verify(cfg(R"({"schema": 1, "model": {"kind": "circle"}, "noise": {"eta": 0.001},
                             "sampler": {"type": "grid", "n": 40}, "beta": 0.5})")).pipeline == Pipeline::h);
    CHECK_THROWS_AS(cmd_verify(cfg(R"({"schema": 1, "model": {"kind": "circle"}, "noise": {"eta": 0.001},
                                       "pipeline": "gh"})")),
                    PreconditionError);
    CHECK_THROWS_AS(cmd_verify(cfg(R"({"schema": 1, "model": {"kind": "flat_torus"}, "pipeline": "h"})")),
                    PreconditionError);
    const auto t = cmd_verify(cfg(R"({"schema": 1, "model": {"kind": "embedded_torus", "R": 2, "r": 1},
                                      "sampler": {"type": "grid", "n": 16}, "beta": 1.0})"));
    CHECK(t.pipeline == Pipeline::h);
    CHECK_FALSE(t.in_window);
}

TEST_CASE("jittered h pipeline certifies the perturbation")
{
    const auto r = cmd_verify(cfg(R"({"schema": 1, "model": {"kind": "circle"}, "noise": {"eta": 0.01, "seed": 3},
                                      "sampler": {"type": "grid", "n": 60}, "beta": 0.5})"));
    REQUIRE(r.perturbation_distortion.has_value());
    CHECK(*r.perturbation_distortion <= 0.02);
    CHECK(r.d_bound == Catch::Approx(std::numbers::pi / 60 + 0.01));
    CHECK(r.pass);
}

TEST_CASE("sweep over the circle grid respects the implication invariant")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "circle"}, "sampler": {"type": "grid", "n": 10},
                          "sweep": {"n": [10, 20, 30, 40, 50, 60, 70, 80, 90, 100],
                                    "beta": [0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4]}})");
    const auto s = cmd_sweep(c);
    REQUIRE(s.rows.size() == 70);
    CHECK(s.counterexamples == 0);
    CHECK(s.exit_code() == 0);
    std::size_t inside = 0;
    for (const auto& row : s.rows)
        if (row.run.in_window)
        {
            ++inside;
            CHECK(row.run.pass);
        }
    CHECK(inside > 0);
    CHECK(s.rows[0].n == 10);
    CHECK(*s.rows[1].beta == 0.4);
    CHECK(s.rows[7].n == 20);

    std::ostringstream csv;
    write_sweep_csv(csv, s);
    const auto lines = split_lines(csv.str());
    CHECK(lines.size() == 71);
    CHECK(lines[0] ==
          "n,beta,zeta,d_bound,lower,upper,in_window,hypotheses_certified,b0,b1,b2,betti_pass,beta_margin,error");
}

TEST_CASE("single-cell sweep equals verify")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "circle"}, "sampler": {"type": "grid", "n": 50}, "beta": 1.0})");
    const auto s = cmd_sweep(c);
    REQUIRE(s.rows.size() == 1);
    CHECK(to_json(s.rows[0].run, c).dump() == to_json(cmd_verify(c), c).dump());
}

TEST_CASE("sweep above Delta is never guaranteed")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "circle"}, "sampler": {"type": "grid", "n": 30},
                          "sweep": {"beta": [1.6, 2.0, 2.5]}})");
    const auto s = cmd_sweep(c);
    for (const auto& row : s.rows)
    {
        CHECK_FALSE(row.run.in_window);
        CHECK(std::find(row.run.flags.begin(), row.run.flags.end(), kEmpiricalFlag) != row.run.flags.end());
    }
}

TEST_CASE("certify the unit sphere")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "sphere2"}, "sampler": {"type": "grid", "n": 10},
                          "certify": {"trials": 500, "seed": 1, "distortion_trials": 10000}})");
    const auto b = cmd_certify(c);
    for (const auto& e : b.entries)
    {
        INFO(e.name << " " << e.status << " " << e.detail.dump());
        CHECK((e.status == "pass" || e.status == "skipped"));
    }
    CHECK(b.valid());
    CHECK(b.pass());
    CHECK(b.exit_code() == 0);
}

TEST_CASE("certify the circle runs the construction verifiers")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "circle"}, "sampler": {"type": "grid", "n": 50}, "beta": 1.0,
                          "certify": {"trials": 50, "distortion_trials": 500}})");
    const auto b = cmd_certify(c);
    CHECK(entry(b, "construction").status == "pass");
    CHECK(b.exit_code() == 0);
}

TEST_CASE("certify the embedded torus gates geodesic checks")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "embedded_torus", "R": 2, "r": 1},
                          "certify": {"trials": 100}})");
    const auto b = cmd_certify(c);
    CHECK(entry(b, "circumradius").status == "unsupported");
    CHECK(entry(b, "subset_center").status == "unsupported");
    CHECK(entry(b, "euclidean_circumradius").status == "pass");
    CHECK(entry(b, "reach_bounds").status == "pass");
    CHECK(entry(b, "reach_scan").status == "pass");
    CHECK(b.valid());
    CHECK(b.pass());
}

TEST_CASE("certify with tau mis-entered as zero is invalid")
{
    const auto c = cfg(R"({"schema": 1, "model": {"kind": "sphere2", "tau": 0}, "certify": {"trials": 20, "distortion_trials": 20}})");
    const auto b = cmd_certify(c);
    CHECK(entry(b, "reach_bounds").status == "error");
    CHECK_FALSE(b.valid());
    CHECK(b.exit_code() == 2);
}

TEST_CASE("widest window scan")
{
    const auto w = widest_window(WindowKind::gh, std::numbers::pi / 2, std::numbers::pi / 50);
    REQUIRE(w.has_value());
    CHECK(w->zeta == Catch::Approx(1.0 / 14));
    const auto h = widest_window(WindowKind::h, 1.0, 0.001);
    REQUIRE(h.has_value());
    CHECK(h->zeta < 1.0 / 14);
    CHECK_FALSE(widest_window(WindowKind::h, 1.0, 1.0).has_value());
}
