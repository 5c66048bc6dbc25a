// ripsrecon: command-line front end for the reconstruction checks.
//
// Exit codes: 0 everything passed, 1 some check failed, 2 invalid input or
// violated preconditions.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ripsrecon/ripsrecon.hpp"

namespace fs = std::filesystem;
using namespace ripsrecon;
using io::json;

namespace {

struct Options
{
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> max_dim;
    std::optional<double> beta;
    std::optional<std::string> zeta;
    // stand-alone verbs
    std::string input;
    std::string distances;
    std::string kind = "gh";
    std::optional<double> delta;
    std::optional<double> tau;
    std::optional<double> d;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_zeta(const std::string& s)
{
    return detail::parse_real(json(s), "--zeta");
}

ExperimentConfig load_config(const Options& o)
{
    if (o.config.empty())
        throw InputError("--config is required");
    ExperimentConfig c = parse_config(read_file(o.config));
    if (o.seed)
    {
        c.sampler.seed = *o.seed;
        c.noise_seed = *o.seed;
        c.certify_seed = *o.seed;
    }
    if (o.max_dim)
    {
        if (*o.max_dim < 0)
            throw InputError("--max-dim must be non-negative");
        c.max_dim = *o.max_dim;
    }
    if (o.beta)
        c.beta = *o.beta;
    if (o.zeta)
        c.zeta = parse_zeta(*o.zeta);
    return c;
}

/// Writes to <out>/<name> when --out is given, otherwise to stdout.
void emit(const Options& o, const std::string& name, const std::string& text)
{
    if (o.out.empty())
    {
        std::cout << text;
        return;
    }
    fs::create_directories(o.out);
    const fs::path p = fs::path(o.out) / name;
    std::ofstream f(p);
    if (!f)
        throw InputError("cannot write " + p.string());
    f << text;
    std::cerr << "wrote " << p.string() << '\n';
}

void emit_json(const Options& o, const std::string& name, const json& j)
{
    emit(o, name, j.dump(2) + "\n");
}

FiniteMetricSpace load_metric(const Options& o)
{
    if (!o.distances.empty())
    {
        std::ifstream in(o.distances);
        if (!in)
            throw InputError("cannot open " + o.distances);
        return io::read_distance_matrix_csv(in);
    }
    if (!o.input.empty())
    {
        std::ifstream in(o.input);
        if (!in)
            throw InputError("cannot open " + o.input);
        return euclidean_metric(io::read_point_cloud_csv(in));
    }
    throw InputError("need --input <points.csv> or --distances <matrix.csv>");
}

int run_verify(const Options& o)
{
    const auto c = load_config(o);
    const auto t0 = std::chrono::steady_clock::now();
    const RunReport r = cmd_verify(c);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_json(o, "verify.json", to_json(r, c));
    std::cerr << "verify: " << (r.pass ? "pass" : "fail") << " in " << secs << " s\n";
    return r.exit_code();
}

int run_sweep(const Options& o)
{
    const auto c = load_config(o);
    const SweepResult s = cmd_sweep(c);
    std::ostringstream csv;
    write_sweep_csv(csv, s);
    emit(o, "sweep.csv", csv.str());
    if (s.counterexamples)
        std::cerr << "sweep: " << s.counterexamples
                  << " cell(s) inside the window with certified hypotheses but wrong Betti numbers\n";
    return s.exit_code();
}

int run_certify(const Options& o)
{
    const auto c = load_config(o);
    const CertifyBundle b = cmd_certify(c);
    emit_json(o, "certify.json", to_json(b, c));
    for (const auto& e : b.entries)
        std::cerr << e.status << "  " << e.name << '\n';
    return b.exit_code();
}

int run_sample(const Options& o)
{
    const auto c = load_config(o);
    const Sample s = sample(c.model, c.sampler);
    std::ostringstream csv;
    if (c.model.has_embedding())
        io::write_csv(csv, perturb(c.model.embed_all(s.points), c.eta, c.noise_seed));
    else
        io::write_csv(csv, s.points, c.model.intrinsic_dim());
    emit(o, "sample.csv", csv.str());
    std::cerr << "fill radius bound: " << s.fill_radius_bound << '\n';
    return 0;
}

int run_rips(const Options& o)
{
    if (!o.beta)
        throw InputError("rips needs --beta");
    const auto ms = load_metric(o);
    const int max_dim = o.max_dim.value_or(2);
    const SimplicialComplex K = rips_complex(ms, *o.beta, max_dim);
    json j = io::to_json(K);
    j["beta"] = *o.beta;
    j["counts"] = io::counts_json(K);
    emit_json(o, "rips.json", j);
    return 0;
}

int run_homology(const Options& o)
{
    const int up_to = o.max_dim.value_or(2);
    SimplicialComplex K;
    if (!o.input.empty() && fs::path(o.input).extension() == ".json")
    {
        json j;
        try
        {
            j = json::parse(read_file(o.input));
        }
        catch (const json::exception& e)
        {
            throw InputError(std::string("complex is not valid JSON: ") + e.what());
        }
        K = io::complex_from_json(j);
    }
    else
    {
        if (!o.beta)
            throw InputError("homology of a point cloud or distance matrix needs --beta");
        K = rips_complex(load_metric(o), *o.beta, up_to + 1);
    }
    emit_json(o, "homology.json", io::homology_report(K, up_to));
    return 0;
}

int run_window(const Options& o)
{
    if (!o.d)
        throw InputError("window needs --d (bound on the sampling distance)");
    const bool gh = o.kind == "gh";
    if (!gh && o.kind != "h")
        throw InputError("--kind must be gh or h");
    const std::optional<double> scale = gh ? o.delta : o.tau;
    if (!scale)
        throw InputError(gh ? "gh window needs --delta" : "h window needs --tau");
    auto make = [&](double zeta) { return gh ? gh_window(*scale, *o.d, zeta) : h_window(*scale, *o.d, zeta); };

    json j;
    j["kind"] = o.kind;
    j["d"] = *o.d;
    if (o.zeta)
    {
        j["window"] = io::to_json(make(parse_zeta(*o.zeta)));
        j["zeta_policy"] = "explicit";
    }
    else
    {
        const auto best = widest_window(gh ? WindowKind::gh : WindowKind::h, *scale, *o.d);
        j["window"] = best ? io::to_json(*best) : json(nullptr);
        j["zeta_policy"] = "widest";
    }
    emit_json(o, "window.json", j);
    return j["window"].is_null() || j["window"]["empty"].get<bool>() ? 1 : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rips-complex reconstruction checks for model manifolds"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "experiment config (JSON, schema 1)")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory (default: stdout)");
        sub->add_option("--seed", o.seed, "override every seed in the config");
        sub->add_option("--max-dim", o.max_dim, "highest Betti number reported");
        sub->add_option("--beta", o.beta, "Rips scale");
        sub->add_option("--zeta", o.zeta, "zeta, as a number or p/q");
    };
    auto standalone = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "output directory (default: stdout)");
        sub->add_option("--max-dim", o.max_dim, "highest dimension");
        sub->add_option("--beta", o.beta, "Rips scale");
        sub->add_option("--input", o.input, "points CSV (or complex JSON for homology)")->check(CLI::ExistingFile);
        sub->add_option("--distances", o.distances, "distance matrix CSV")->check(CLI::ExistingFile);
    };

    auto* verify = app.add_subcommand("verify", "sample, build the Rips complex and compare Betti numbers");
    auto* sweep = app.add_subcommand("sweep", "run a grid of (n, beta, zeta) cells, CSV out");
    auto* certify = app.add_subcommand("certify", "run every inequality and construction check for a model");
    auto* samp = app.add_subcommand("sample", "write the configured sample as CSV");
    for (auto* s : {verify, sweep, certify, samp})
        common(s);
    auto* rips = app.add_subcommand("rips", "Rips complex of a point cloud or distance matrix");
    auto* hom = app.add_subcommand("homology", "Betti numbers of a complex or of a Rips complex");
    standalone(rips);
    standalone(hom);
    auto* win = app.add_subcommand("window", "admissible scale window");
    win->add_option("--kind", o.kind, "gh or h")->check(CLI::IsMember({"gh", "h"}));
    win->add_option("--delta", o.delta, "Delta of the model (gh)");
    win->add_option("--tau", o.tau, "reach of the model (h)");
    win->add_option("--d", o.d, "bound on the sampling distance")->required();
    win->add_option("--zeta", o.zeta, "zeta, as a number or p/q; omitted: widest window");
    win->add_option("--out", o.out, "output directory (default: stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        if (*verify)
            return run_verify(o);
        if (*sweep)
            return run_sweep(o);
        if (*certify)
            return run_certify(o);
        if (*samp)
            return run_sample(o);
        if (*rips)
            return run_rips(o);
        if (*hom)
            return run_homology(o);
        if (*win)
            return run_window(o);
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
