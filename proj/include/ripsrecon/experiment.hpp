#pragma once

/**
 * End-to-end runs: sample a model, certify the sampling distance, pick a scale
 * in the theorem's window, build the Rips complex and compare Betti numbers
 * with the model's ground truth. Also parameter sweeps and the certification
 * bundle of all inequality checks for one model.
 *
 * Reports are deterministic functions of the configuration; wall time is kept
 * out of them.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "complex.hpp"
#include "conditions.hpp"
#include "error.hpp"
#include "homology.hpp"
#include "io.hpp"
#include "jung.hpp"
#include "manifold.hpp"
#include "maps.hpp"
#include "metric.hpp"
#include "random.hpp"

namespace ripsrecon {

using io::json;

enum class Pipeline
{
    automatic,
    gh, ///< intrinsic metric, Gromov-Hausdorff window
    h   ///< Euclidean metric on the embedded cloud, Hausdorff window
};

inline std::string to_string(Pipeline p)
{
    switch (p)
    {
    case Pipeline::automatic: return "auto";
    case Pipeline::gh: return "gh";
    case Pipeline::h: return "h";
    }
    return "?";
}

inline constexpr int kConfigSchema = 1;

struct ExperimentConfig
{
    json model_json;
    ManifoldModel model = ManifoldModel::circle(1.0);
    SamplerSpec sampler = SamplerSpec::grid(50);
    double eta = 0.0;
    std::uint64_t noise_seed = 0;
    std::optional<double> zeta;  ///< default 1/14 (gh) or 1/28 (h)
    std::optional<double> beta;  ///< absent: geometric midpoint of the window
    int max_dim = 2;
    Pipeline pipeline = Pipeline::automatic;
    std::vector<std::size_t> sweep_n;
    std::vector<double> sweep_beta;
    std::vector<double> sweep_zeta;
    std::size_t certify_trials = 500;
    std::size_t distortion_trials = 10'000;
    std::uint64_t certify_seed = 1;
};

namespace detail {

/// A number, or a string "p/q" or decimal.
inline double parse_real(const json& j, const std::string& what)
{
    if (j.is_number())
        return j.get<double>();
    if (j.is_string())
    {
        const std::string s = j.get<std::string>();
        const auto slash = s.find('/');
        try
        {
            std::size_t used = 0;
            if (slash == std::string::npos)
            {
                const double v = std::stod(s, &used);
                if (used == s.size())
                    return v;
            }
            else
            {
                const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
                std::size_t ua = 0, ub = 0;
                const double p = std::stod(a, &ua), q = std::stod(b, &ub);
                if (ua == a.size() && ub == b.size() && q != 0)
                    return p / q;
            }
        }
        catch (const std::logic_error&)
        {
        }
        throw InputError(what + ": cannot parse '" + s + "' as a number or fraction p/q");
    }
    throw InputError(what + ": expected a number or a string \"p/q\"");
}

inline std::uint64_t parse_seed(const json& j, const std::string& what)
{
    if (!j.is_number_unsigned())
        throw InputError(what + ": seed must be a non-negative integer");
    return j.get<std::uint64_t>();
}

inline ManifoldModel parse_model(const json& j)
{
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw InputError("config: \"model\" must be an object with a string \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    auto num = [&](const char* key, double fallback) {
        return j.contains(key) ? parse_real(j[key], std::string("model.") + key) : fallback;
    };
    std::optional<ManifoldModel> m;
    if (kind == "circle")
        m = ManifoldModel::circle(num("R", 1.0));
    else if (kind == "sphere2")
        m = ManifoldModel::sphere2(num("R", 1.0));
    else if (kind == "flat_torus")
        m = ManifoldModel::flat_torus(num("L", 2 * std::numbers::pi));
    else if (kind == "embedded_torus")
        m = ManifoldModel::embedded_torus(num("R", 2.0), num("r", 1.0));
    else
        throw InputError("config: unknown model kind '" + kind +
                         "' (circle, sphere2, flat_torus, embedded_torus)");

    // manual overrides of the condition-number ingredients; validated where used
    auto& c = m->constants();
    bool recompute = false;
    if (j.contains("tau"))
        c.tau = Constant{parse_real(j["tau"], "model.tau"), Provenance::derived_bound};
    if (j.contains("rho"))
    {
        c.rho = {parse_real(j["rho"], "model.rho"), Provenance::derived_bound};
        recompute = true;
    }
    if (j.contains("kappa_sup"))
    {
        c.kappa_sup = Constant{parse_real(j["kappa_sup"], "model.kappa_sup"), Provenance::derived_bound};
        recompute = true;
    }
    if (recompute)
    {
        const std::optional<double> kappa =
            c.kappa_sup ? std::optional(c.kappa_sup->value) : std::nullopt;
        c.delta = {delta_of(c.rho.value, kappa), Provenance::derived_bound};
    }
    return *m;
}

} // namespace detail

/// Parses a schema-1 configuration. Throws InputError on malformed input.
inline ExperimentConfig parse_config(const json& j)
{
    if (!j.is_object())
        throw InputError("config must be a JSON object");
    if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != kConfigSchema)
        throw InputError("config: \"schema\" must be 1");
    if (!j.contains("model"))
        throw InputError("config: \"model\" is required");
    ExperimentConfig c;
    c.model_json = j["model"];
    c.model = detail::parse_model(j["model"]);

    if (j.contains("sampler"))
    {
        const auto& s = j["sampler"];
        if (!s.is_object() || !s.contains("type") || !s.contains("n") || !s["n"].is_number_unsigned())
            throw InputError("config: \"sampler\" needs \"type\" and a positive integer \"n\"");
        const std::string type = s["type"].get<std::string>();
        const auto n = s["n"].get<std::size_t>();
        if (type == "grid")
            c.sampler = SamplerSpec::grid(n);
        else if (type == "random")
        {
            if (!s.contains("seed"))
                throw InputError("config: random sampler requires a \"seed\"");
            c.sampler = SamplerSpec::random(n, detail::parse_seed(s["seed"], "sampler.seed"));
        }
        else
            throw InputError("config: sampler type must be \"grid\" or \"random\"");
    }
    c.noise_seed = c.sampler.seed;
    if (j.contains("noise"))
    {
        const auto& nz = j["noise"];
        if (!nz.is_object())
            throw InputError("config: \"noise\" must be an object");
        if (nz.contains("eta"))
            c.eta = detail::parse_real(nz["eta"], "noise.eta");
        if (c.eta < 0)
            throw InputError("config: noise.eta must be non-negative");
        if (nz.contains("seed"))
            c.noise_seed = detail::parse_seed(nz["seed"], "noise.seed");
    }
    if (j.contains("zeta"))
        c.zeta = detail::parse_real(j["zeta"], "zeta");
    if (j.contains("beta"))
    {
        if (j["beta"].is_string() && j["beta"].get<std::string>() == "midpoint")
            c.beta.reset();
        else
            c.beta = detail::parse_real(j["beta"], "beta");
    }
    if (j.contains("max_dim"))
    {
        if (!j["max_dim"].is_number_integer() || j["max_dim"].get<int>() < 0)
            throw InputError("config: max_dim must be a non-negative integer");
        c.max_dim = j["max_dim"].get<int>();
    }
    if (j.contains("pipeline"))
    {
        const std::string p = j["pipeline"].get<std::string>();
        if (p == "auto")
            c.pipeline = Pipeline::automatic;
        else if (p == "gh")
            c.pipeline = Pipeline::gh;
        else if (p == "h")
            c.pipeline = Pipeline::h;
        else
            throw InputError("config: pipeline must be auto, gh or h");
    }
    if (j.contains("sweep"))
    {
        const auto& s = j["sweep"];
        if (s.contains("n"))
            for (const auto& v : s["n"])
            {
                if (!v.is_number_unsigned())
                    throw InputError("config: sweep.n entries must be positive integers");
                c.sweep_n.push_back(v.get<std::size_t>());
            }
        if (s.contains("beta"))
            for (const auto& v : s["beta"])
                c.sweep_beta.push_back(detail::parse_real(v, "sweep.beta"));
        if (s.contains("zeta"))
            for (const auto& v : s["zeta"])
                c.sweep_zeta.push_back(detail::parse_real(v, "sweep.zeta"));
    }
    if (j.contains("certify"))
    {
        const auto& s = j["certify"];
        if (s.contains("trials"))
            c.certify_trials = s["trials"].get<std::size_t>();
        if (s.contains("distortion_trials"))
            c.distortion_trials = s["distortion_trials"].get<std::size_t>();
        if (s.contains("seed"))
            c.certify_seed = detail::parse_seed(s["seed"], "certify.seed");
    }
    return c;
}

inline ExperimentConfig parse_config(const std::string& text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::exception& e)
    {
        throw InputError(std::string("config is not valid JSON: ") + e.what());
    }
    try
    {
        return parse_config(j);
    }
    catch (const json::exception& e)
    {
        throw InputError(std::string("config has a field of the wrong type: ") + e.what());
    }
}

enum class WindowKind
{
    gh,
    h
};

inline constexpr std::size_t kZetaScanSteps = 1000;

/**
 * Scans zeta = k / (14 * steps), k = 1..steps, and returns the window with the
 * largest width upper - lower, or nothing if every window is empty. This is a
 * tool policy for choosing zeta, not part of the guarantee.
 */
inline std::optional<ScaleWindow<double>> widest_window(WindowKind kind, double scale, double d,
                                                        std::size_t steps = kZetaScanSteps)
{
    std::optional<ScaleWindow<double>> best;
    for (std::size_t k = 1; k <= steps; ++k)
    {
        const double zeta = static_cast<double>(k) / (14.0 * static_cast<double>(steps));
        const auto w = kind == WindowKind::gh ? gh_window(scale, d, zeta) : h_window(scale, d, zeta);
        if (!w.empty && (!best || w.upper - w.lower > best->upper - best->lower))
            best = w;
    }
    return best;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

inline constexpr const char* kEmpiricalFlag = "beta outside guaranteed window; empirical regime";
inline constexpr const char* kNoScaleFailure = "no admissible beta; increase density or zeta";

struct RunReport
{
    ConstantsReport constants;
    Pipeline pipeline = Pipeline::gh;
    std::size_t sample_size = 0;
    double fill_radius_bound = 0.0;
    double eta = 0.0;
    double d_bound = 0.0;                          ///< certified bound on d_GH (gh) or d_H (h)
    std::optional<double> perturbation_distortion; ///< nn correspondence, clean vs perturbed
    std::optional<ScaleWindow<double>> window;
    std::optional<double> beta;
    std::string beta_policy;
    bool in_window = false;
    bool hypotheses_certified = false;
    std::vector<std::size_t> counts;
    BettiVector betti;
    std::vector<std::size_t> truth;
    bool pass = false;
    std::vector<std::string> flags;
    std::optional<std::string> failure;

    /// 0 pass, 1 Betti mismatch, 2 no admissible scale.
    int exit_code() const { return pass ? 0 : (failure ? 2 : 1); }
};

namespace detail {

inline Pipeline resolve_pipeline(const ManifoldModel& m, Pipeline requested, double eta)
{
    if (requested == Pipeline::gh)
    {
        if (!m.has_geodesics())
            throw PreconditionError("gh pipeline needs geodesic distances; " + to_string(m.kind()) +
                                    " has none (use the h pipeline)");
        if (eta > 0 && m.kind() != ManifoldKind::flat_torus)
            throw PreconditionError("gh pipeline needs samples on the model; use the h pipeline for eta > 0");
        return Pipeline::gh;
    }
    if (requested == Pipeline::h)
    {
        if (!m.has_embedding())
            throw PreconditionError("h pipeline needs an embedding; " + to_string(m.kind()) + " has none");
        return Pipeline::h;
    }
    if (m.has_geodesics() && (eta == 0 || m.kind() == ManifoldKind::flat_torus))
        return Pipeline::gh;
    return Pipeline::h;
}

inline double default_zeta(Pipeline p)
{
    return p == Pipeline::gh ? 1.0 / 14 : 1.0 / 28;
}

inline std::vector<std::size_t> padded_truth(const ManifoldModel& m, int max_dim)
{
    std::vector<std::size_t> t(static_cast<std::size_t>(max_dim) + 1, 0);
    for (std::size_t k = 0; k < t.size() && k < m.betti_truth().size(); ++k)
        t[k] = m.betti_truth()[k];
    return t;
}

} // namespace detail

/// One sample -> window -> Rips -> Betti run.
inline RunReport run_cell(const ManifoldModel& m, const SamplerSpec& sampler, double eta,
                          std::uint64_t noise_seed, std::optional<double> zeta_opt,
                          std::optional<double> beta_opt, int max_dim, Pipeline requested)
{
    detail::require(max_dim >= 0, "max_dim must be non-negative");
    RunReport r;
    r.constants = m.constants();
    r.pipeline = detail::resolve_pipeline(m, requested, eta);
    r.eta = eta;
    const double zeta = zeta_opt.value_or(detail::default_zeta(r.pipeline));

    const Sample s = sample(m, sampler);
    r.sample_size = s.points.size();
    r.fill_radius_bound = s.fill_radius_bound;
    r.d_bound = s.fill_radius_bound + eta;
    r.truth = detail::padded_truth(m, max_dim);

    FiniteMetricSpace metric;
    if (r.pipeline == Pipeline::gh)
    {
        std::vector<ChartPoint> pts = s.points;
        if (eta > 0)
        {
            // flat torus: displace in the chart and wrap; moves each point at most eta
            PointCloud chart(2);
            for (const auto& p : pts)
                chart.push_back({p[0], p[1]});
            const PointCloud moved = perturb(chart, eta, noise_seed);
            const double L = m.primary();
            for (Index i = 0; i < pts.size(); ++i)
                pts[i] = {std::fmod(std::fmod(moved[i][0], L) + L, L), std::fmod(std::fmod(moved[i][1], L) + L, L)};
        }
        metric = m.geodesic_metric(pts);
        r.window = gh_window(m.constants().delta.value, r.d_bound, zeta);
    }
    else
    {
        if (!m.constants().tau)
            throw PreconditionError("h pipeline needs the reach tau of the model");
        const PointCloud clean = m.embed_all(s.points);
        const PointCloud cloud = perturb(clean, eta, noise_seed);
        if (eta > 0)
        {
            const auto C = nn_correspondence(clean, cloud);
            r.perturbation_distortion = correspondence_distortion(C, euclidean_metric(clean), euclidean_metric(cloud));
        }
        metric = euclidean_metric(cloud);
        r.window = h_window(m.constants().tau->value, r.d_bound, zeta);
    }
    r.hypotheses_certified = !r.window->empty &&
                             (!r.perturbation_distortion || *r.perturbation_distortion <= 2 * eta + 1e-12);

    if (beta_opt)
    {
        r.beta = *beta_opt;
        r.beta_policy = "explicit";
    }
    else if (!r.window->empty)
    {
        r.beta = window_midpoint(*r.window);
        r.beta_policy = "midpoint";
    }
    else
    {
        r.beta_policy = "midpoint";
        r.failure = kNoScaleFailure;
        return r;
    }
    r.in_window = r.window->contains(*r.beta);
    if (!r.in_window)
        r.flags.push_back(kEmpiricalFlag);

    const SimplicialComplex K = rips_complex(metric, *r.beta, max_dim + 1);
    for (int k = 0; k <= K.dimension(); ++k)
        r.counts.push_back(K.count(k));
    r.betti = betti_numbers(K, max_dim);
    for (const auto& f : r.betti.flags)
        r.flags.push_back(f);
    r.pass = r.betti.exact() && r.betti.betti == r.truth;
    return r;
}

inline RunReport cmd_verify(const ExperimentConfig& c)
{
    return run_cell(c.model, c.sampler, c.eta, c.noise_seed, c.zeta, c.beta, c.max_dim, c.pipeline);
}

inline json sampler_json(const SamplerSpec& s)
{
    json j;
    j["type"] = s.type == SamplerSpec::Type::grid ? "grid" : "random";
    j["n"] = s.n;
    if (s.type == SamplerSpec::Type::random)
        j["seed"] = s.seed;
    return j;
}

inline json to_json(const RunReport& r, const ExperimentConfig& c)
{
    json j;
    j["schema"] = kConfigSchema;
    j["model"] = c.model_json;
    j["constants"] = io::to_json(r.constants);
    j["pipeline"] = to_string(r.pipeline);
    j["sampler"] = sampler_json(c.sampler);
    j["sample_size"] = r.sample_size;
    j["noise"] = json{{"eta", r.eta}, {"seed", c.noise_seed}};
    json cert;
    cert["fill_radius_bound"] = r.fill_radius_bound;
    cert["distance_bound"] = r.d_bound;
    cert["distance_kind"] = r.pipeline == Pipeline::gh ? "gromov-hausdorff" : "hausdorff";
    cert["perturbation_distortion"] = r.perturbation_distortion ? json(*r.perturbation_distortion) : json(nullptr);
    j["certificates"] = cert;
    j["window"] = r.window ? io::to_json(*r.window) : json(nullptr);
    j["beta"] = r.beta ? json(*r.beta) : json(nullptr);
    j["beta_policy"] = r.beta_policy;
    j["in_window"] = r.in_window;
    j["hypotheses_certified"] = r.hypotheses_certified;
    j["complex_counts"] = r.counts;
    j["betti"] = r.beta ? json(r.betti.betti) : json(nullptr);
    j["betti_truth"] = r.truth;
    j["pass"] = r.pass;
    j["flags"] = r.flags;
    j["failure"] = r.failure ? json(*r.failure) : json(nullptr);
    return j;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepRow
{
    std::size_t n = 0;
    std::optional<double> beta;
    double zeta = 0.0;
    RunReport run;
    std::optional<std::string> error;
};

struct SweepResult
{
    std::vector<SweepRow> rows;
    int max_dim = 2;
    std::size_t counterexamples = 0; ///< rows with in_window and certified but Betti mismatch

    int exit_code() const { return counterexamples ? 1 : 0; }
};

/// One row per (n, beta, zeta), n outermost. Empty grids fall back to the config values.
inline SweepResult cmd_sweep(const ExperimentConfig& c)
{
    SweepResult out;
    out.max_dim = c.max_dim;
    const Pipeline resolved = detail::resolve_pipeline(c.model, c.pipeline, c.eta);
    std::vector<std::size_t> ns = c.sweep_n.empty() ? std::vector<std::size_t>{c.sampler.n} : c.sweep_n;
    std::vector<std::optional<double>> betas;
    for (double b : c.sweep_beta)
        betas.emplace_back(b);
    if (betas.empty())
        betas.push_back(c.beta);
    std::vector<double> zetas = c.sweep_zeta;
    if (zetas.empty())
        zetas.push_back(c.zeta.value_or(detail::default_zeta(resolved)));

    for (std::size_t n : ns)
        for (const auto& beta : betas)
            for (double zeta : zetas)
            {
                SweepRow row;
                row.n = n;
                row.beta = beta;
                row.zeta = zeta;
                SamplerSpec s = c.sampler;
                s.n = n;
                try
                {
                    row.run = run_cell(c.model, s, c.eta, c.noise_seed, zeta, beta, c.max_dim, c.pipeline);
                    row.beta = row.run.beta;
                }
                catch (const Error& e)
                {
                    row.error = e.what();
                }
                if (!row.error && row.run.in_window && row.run.hypotheses_certified && !row.run.pass)
                    ++out.counterexamples;
                out.rows.push_back(std::move(row));
            }
    return out;
}

namespace detail {

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char ch : s)
    {
        if (ch == '"')
            q += '"';
        q += ch;
    }
    return q + '"';
}

inline std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace detail

/// Fixed columns: n,beta,zeta,d_bound,lower,upper,in_window,hypotheses_certified,b0..bk,betti_pass,beta_margin,error
inline void write_sweep_csv(std::ostream& out, const SweepResult& s)
{
    out << "n,beta,zeta,d_bound,lower,upper,in_window,hypotheses_certified";
    for (int k = 0; k <= s.max_dim; ++k)
        out << ",b" << k;
    out << ",betti_pass,beta_margin,error\n";
    for (const auto& row : s.rows)
    {
        const auto& r = row.run;
        const bool ran = !row.error && r.window.has_value();
        out << row.n << ',' << (row.beta ? detail::fmt(*row.beta) : "") << ',' << detail::fmt(row.zeta) << ',';
        out << (ran ? detail::fmt(r.d_bound) : "") << ',';
        out << (ran ? detail::fmt(r.window->lower) : "") << ',' << (ran ? detail::fmt(r.window->upper) : "") << ',';
        out << (ran && r.in_window ? "true" : "false") << ',' << (ran && r.hypotheses_certified ? "true" : "false");
        const bool has_betti = ran && r.beta && !r.failure;
        for (int k = 0; k <= s.max_dim; ++k)
            out << ',' << (has_betti ? std::to_string(r.betti.betti[static_cast<std::size_t>(k)]) : "");
        out << ',' << (has_betti && r.pass ? "true" : "false") << ',';
        if (ran && row.beta && !r.window->empty)
            out << detail::fmt(std::min(*row.beta - r.window->lower, r.window->upper - *row.beta));
        out << ',' << detail::csv_field(row.error ? *row.error : r.failure.value_or("")) << '\n';
    }
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

struct CertifyEntry
{
    std::string name;
    std::string status; ///< pass, fail, unsupported, skipped, error
    json detail;
};

struct CertifyBundle
{
    std::vector<CertifyEntry> entries;

    bool valid() const
    {
        return std::none_of(entries.begin(), entries.end(), [](const auto& e) { return e.status == "error"; });
    }
    bool pass() const
    {
        return std::none_of(entries.begin(), entries.end(),
                            [](const auto& e) { return e.status == "fail" || e.status == "error"; });
    }
    int exit_code() const { return !valid() ? 2 : (pass() ? 0 : 1); }
};

inline constexpr std::size_t kReachScanGrid = 60;
inline constexpr double kReachScanTolerance = 0.05; ///< relative excess allowed over tau

namespace detail {

/// Sample indices forming a closed loop of grid neighbours (grid samplers only).
inline std::vector<Index> grid_loop(const ManifoldModel& m, std::size_t n)
{
    std::vector<Index> loop;
    switch (m.kind())
    {
    case ManifoldKind::circle:
        for (Index i = 0; i < n; ++i)
            loop.push_back(i);
        break;
    case ManifoldKind::sphere2:
    {
        // the ring nearest the equator
        const std::size_t ring = std::max<std::size_t>(1, n / 2);
        for (Index j = 0; j < 2 * n; ++j)
            loop.push_back(1 + (ring - 1) * 2 * n + j);
        break;
    }
    default:
        for (Index j = 0; j < n; ++j)
            loop.push_back(j);
        break;
    }
    return loop;
}

inline CertifyEntry guarded(const std::string& name, const std::function<CertifyEntry()>& body)
{
    try
    {
        return body();
    }
    catch (const UnsupportedError& e)
    {
        return {name, "unsupported", json{{"reason", e.what()}}};
    }
    catch (const Error& e)
    {
        return {name, "error", json{{"reason", e.what()}}};
    }
}

} // namespace detail

/// Runs every inequality and construction check available for the model.
inline CertifyBundle cmd_certify(const ExperimentConfig& c)
{
    const ManifoldModel& m = c.model;
    const auto& k = m.constants();
    CertifyBundle b;
    auto add = [&](const std::string& name, const std::function<CertifyEntry()>& body) {
        b.entries.push_back(detail::guarded(name, body));
    };
    auto status = [](bool ok) { return std::string(ok ? "pass" : "fail"); };

    add("delta", [&] {
        const std::optional<double> kappa = k.kappa_sup ? std::optional(k.kappa_sup->value) : std::nullopt;
        const double expected = delta_of(k.rho.value, kappa);
        return CertifyEntry{"delta", status(std::abs(expected - k.delta.value) <= 1e-12),
                            json{{"delta", k.delta.value}, {"from_rho_kappa", expected}}};
    });

    add("reach_bounds", [&] {
        if (!k.tau)
            throw UnsupportedError("model has no reach (no embedding)");
        const auto rb = reach_bounds(k.tau->value);
        constexpr double tol = 1e-12;
        bool ok = k.rho.value >= rb.rho_lower - tol && k.delta.value >= rb.delta_lower - tol;
        if (k.kappa_sup)
            ok = ok && k.kappa_sup->value >= rb.kappa_lo - tol && k.kappa_sup->value <= rb.kappa_hi + tol;
        return CertifyEntry{"reach_bounds", status(ok),
                            json{{"B_norm_bound", rb.B_norm_bound},
                                 {"kappa_range", {rb.kappa_lo, rb.kappa_hi}},
                                 {"rho_lower", rb.rho_lower},
                                 {"delta_lower", rb.delta_lower}}};
    });

    add("reach_scan", [&] {
        if (!k.tau)
            throw UnsupportedError("model has no reach (no embedding)");
        const double tau = k.tau->value;
        detail::require(tau > 0, "reach_scan: tau must be positive");
        const double est = reach_estimate(m, kReachScanGrid);
        const bool ok = est >= tau - 1e-9 && est <= tau * (1 + kReachScanTolerance);
        return CertifyEntry{"reach_scan", status(ok),
                            json{{"grid", kReachScanGrid}, {"estimate", est}, {"tau", tau}}};
    });

    add("circumradius", [&] {
        if (!m.has_geodesics())
            throw UnsupportedError("geodesic circumcenters unavailable for " + to_string(m.kind()));
        const auto r = circumradius_campaign(m, c.certify_trials, c.certify_seed);
        return CertifyEntry{"circumradius", status(r.pass()), io::to_json(r)};
    });

    add("subset_center", [&] {
        if (!m.has_geodesics())
            throw UnsupportedError("geodesic circumcenters unavailable for " + to_string(m.kind()));
        const auto r = subset_center_campaign(m, c.certify_trials, c.certify_seed + 1);
        return CertifyEntry{"subset_center", status(r.pass()), io::to_json(r)};
    });

    add("euclidean_circumradius", [&] {
        Rng rng(c.certify_seed + 2);
        const std::size_t dim = m.has_embedding() ? m.ambient_dim() : 2;
        std::size_t failures = 0;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < c.certify_trials; ++t)
        {
            PointCloud pc(dim);
            std::vector<double> p(dim);
            const std::size_t count = 2 + rng.index(9);
            for (std::size_t i = 0; i < count; ++i)
            {
                for (auto& x : p)
                    x = rng.uniform(-1.0, 1.0);
                pc.push_back(p);
            }
            const auto r = check_circum_bound(pc);
            worst = std::max(worst, kCircumradiusFactor * r.radius - r.diam);
            failures += r.pass ? 0 : 1;
        }
        return CertifyEntry{"euclidean_circumradius", status(failures == 0),
                            json{{"trials", c.certify_trials}, {"failures", failures}, {"worst_excess", worst}}};
    });

    for (double xi : {1.1, 4.0 / 3.0, 1.9})
    {
        std::ostringstream label;
        label << "distortion_xi_" << std::setprecision(4) << xi;
        const std::string name = label.str();
        add(name, [&, xi, name] {
            const auto r = check_distortion(m, xi, c.distortion_trials, c.certify_seed + 3);
            return CertifyEntry{name, status(r.pass), io::to_json(r)};
        });
    }

    add("jung_J", [&] {
        const int n = m.intrinsic_dim();
        constexpr std::size_t grid = 1000;
        bool ok = true;
        double min_ratio = std::numeric_limits<double>::infinity();
        if (k.kappa_sup && k.kappa_sup->value > 0)
        {
            const double kappa = k.kappa_sup->value;
            const double top = std::numbers::pi / (4 * std::sqrt(kappa));
            double prev = std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i <= grid; ++i)
            {
                const double r = top * static_cast<double>(i) / grid;
                const double ratio = jung_J(r, kappa, n) / r;
                ok = ok && ratio < prev && ratio >= kCircumradiusFactor - 1e-12;
                min_ratio = std::min(min_ratio, ratio);
                prev = ratio;
            }
        }
        else
        {
            min_ratio = jung_min_diam(1.0, n, 0.0);
            ok = min_ratio >= kCircumradiusFactor;
        }
        return CertifyEntry{"jung_J", status(ok), json{{"n", n}, {"min_ratio", min_ratio}}};
    });

    add("construction", [&] {
        if (c.sampler.type != SamplerSpec::Type::grid || !m.has_geodesics() || c.eta > 0)
            return CertifyEntry{"construction", "skipped",
                                json{{"reason", "needs a noiseless grid sample on a model with geodesics"}}};
        const double zeta = c.zeta.value_or(1.0 / 14);
        const Sample s = sample(m, c.sampler);
        const auto w = gh_window(k.delta.value, s.fill_radius_bound, zeta);
        const double beta = c.beta ? *c.beta : (w.empty ? 0.0 : window_midpoint(w));
        if (!w.contains(beta))
            return CertifyEntry{"construction", "skipped",
                                json{{"reason", "beta is not inside the Gromov-Hausdorff window"}, {"window", io::to_json(w)}}};
        ReferenceNet net;
        try
        {
            net = nested_grid_net(m, c.sampler.n, zeta * beta / 10);
        }
        catch (const PreconditionError& e)
        {
            return CertifyEntry{"construction", "skipped", json{{"reason", e.what()}}};
        }
        const FiniteMetricSpace S = m.geodesic_metric(s.points);
        const auto C = nn_correspondence(net.points.size(), s.points.size(),
                                         [&](Index i, Index j) { return m.distance(net.points[i], s.points[j]); });
        const auto loop = detail::grid_loop(m, c.sampler.n);
        if (loop.size() < 3)
            return CertifyEntry{"construction", "skipped", json{{"reason", "grid too coarse for a loop"}}};
        auto K = share(cycle_complex(loop.size()));
        auto L = share(rips_complex(S, beta, 1));
        VertexMap g;
        for (Vertex i = 0; i < loop.size(); ++i)
            g[i] = static_cast<Vertex>(loop[i]);
        const auto gc = check_simplicial(g, K, L);
        if (!gc.ok())
            return CertifyEntry{"construction", "fail", json{{"reason", "loop map is not simplicial into R_beta(S)"}}};
        const auto sur = verify_surjectivity_construction(m, net, S, C, beta, zeta, *gc.map);
        const auto chain = verify_contiguity_chain(net.metric, net.fill_radius_bound, S, C, beta, zeta,
                                                   ChainKind::gromov_hausdorff);
        return CertifyEntry{"construction", status(sur.passed() && chain.passed()),
                            json{{"net_size", net.points.size()},
                                 {"surjectivity", io::to_json(sur)},
                                 {"contiguity_chain", io::to_json(chain)}}};
    });
    return b;
}

inline json to_json(const CertifyBundle& b, const ExperimentConfig& c)
{
    json j;
    j["schema"] = kConfigSchema;
    j["model"] = c.model_json;
    j["constants"] = io::to_json(c.model.constants());
    j["valid"] = b.valid();
    j["pass"] = b.pass();
    j["checks"] = json::array();
    for (const auto& e : b.entries)
        j["checks"].push_back(json{{"name", e.name}, {"status", e.status}, {"detail", e.detail}});
    return j;
}

} // namespace ripsrecon
