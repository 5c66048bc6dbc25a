#pragma once

/**
 * CSV and JSON readers/writers for point clouds, distance matrices,
 * complexes and reports.
 *
 * CSV: one row per point (or matrix row), comma separated, no header; blank
 * lines and lines starting with '#' are skipped.
 */

#include <charconv>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "complex.hpp"
#include "conditions.hpp"
#include "error.hpp"
#include "homology.hpp"
#include "manifold.hpp"
#include "metric.hpp"

namespace ripsrecon::io {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(const std::string& field, std::size_t line)
{
    const std::string t = trim(field);
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (t.empty() || ec != std::errc() || ptr != last)
        throw InputError("line " + std::to_string(line) + ": not a number: '" + t + "'");
    return v;
}

} // namespace detail

/// Rows of numbers; every row must have the same length.
inline std::vector<std::vector<double>> read_csv_rows(std::istream& in)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        std::vector<double> row;
        std::stringstream ss(t);
        std::string field;
        while (std::getline(ss, field, ','))
            row.push_back(detail::parse_number(field, lineno));
        if (t.back() == ',')
            throw InputError("line " + std::to_string(lineno) + ": trailing comma");
        if (!rows.empty() && row.size() != rows.front().size())
            throw InputError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(rows.front().size()) + " fields, found " +
                             std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline PointCloud read_point_cloud_csv(std::istream& in)
{
    const auto rows = read_csv_rows(in);
    if (rows.empty())
        throw InputError("point cloud is empty");
    PointCloud pc(rows.front().size());
    for (const auto& r : rows)
        pc.push_back(r);
    return pc;
}

inline FiniteMetricSpace read_distance_matrix_csv(std::istream& in)
{
    const auto rows = read_csv_rows(in);
    if (rows.empty() || rows.size() != rows.front().size())
        throw InputError("distance matrix must be square and non-empty");
    std::vector<double> d;
    d.reserve(rows.size() * rows.size());
    for (const auto& r : rows)
        d.insert(d.end(), r.begin(), r.end());
    return FiniteMetricSpace(rows.size(), std::move(d));
}

inline void write_csv(std::ostream& out, const PointCloud& pc)
{
    out << std::setprecision(17);
    for (Index i = 0; i < pc.size(); ++i)
    {
        const auto p = pc[i];
        for (std::size_t k = 0; k < p.size(); ++k)
            out << (k ? "," : "") << p[k];
        out << '\n';
    }
}

inline void write_csv(std::ostream& out, const std::vector<ChartPoint>& pts, int dim)
{
    out << std::setprecision(17);
    for (const auto& p : pts)
    {
        out << p[0];
        if (dim > 1)
            out << ',' << p[1];
        out << '\n';
    }
}

/// JSON array of equal-length numeric arrays.
inline PointCloud point_cloud_from_json(const json& j)
{
    if (!j.is_array() || j.empty())
        throw InputError("point cloud JSON must be a non-empty array of arrays");
    PointCloud pc(j.front().size());
    std::vector<double> p;
    for (const auto& row : j)
    {
        if (!row.is_array())
            throw InputError("point cloud JSON must be an array of arrays");
        p.clear();
        for (const auto& x : row)
        {
            if (!x.is_number())
                throw InputError("point cloud JSON: non-numeric coordinate");
            p.push_back(x.get<double>());
        }
        pc.push_back(p);
    }
    return pc;
}

inline json to_json(const PointCloud& pc)
{
    json a = json::array();
    for (Index i = 0; i < pc.size(); ++i)
    {
        const auto p = pc[i];
        a.push_back(std::vector<double>(p.begin(), p.end()));
    }
    return a;
}

/// {"max_dim": k, "simplices": [maximal simplices]}.
inline json to_json(const SimplicialComplex& K)
{
    json j;
    j["max_dim"] = K.max_dim();
    j["simplices"] = json::array();
    for (const auto& s : K.maximal_simplices())
        j["simplices"].push_back(s);
    return j;
}

inline SimplicialComplex complex_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("simplices") || !j["simplices"].is_array())
        throw InputError("complex JSON needs a \"simplices\" array");
    std::vector<Simplex> gens;
    int top = 0;
    for (const auto& s : j["simplices"])
    {
        if (!s.is_array() || s.empty())
            throw InputError("complex JSON: each simplex must be a non-empty array of vertex ids");
        Simplex v;
        for (const auto& x : s)
        {
            if (!x.is_number_unsigned())
                throw InputError("complex JSON: vertex ids must be non-negative integers");
            v.push_back(x.get<Vertex>());
        }
        top = std::max(top, static_cast<int>(v.size()) - 1);
        gens.push_back(std::move(v));
    }
    const int max_dim = j.contains("max_dim") ? j["max_dim"].get<int>() : top;
    return SimplicialComplex::from_simplices(gens, max_dim);
}

inline json counts_json(const SimplicialComplex& K)
{
    json c = json::array();
    for (int k = 0; k <= K.dimension(); ++k)
        c.push_back(K.count(k));
    return c;
}

inline json to_json(const BettiVector& b)
{
    json j;
    j["betti"] = b.betti;
    j["flags"] = b.flags;
    return j;
}

inline json homology_report(const SimplicialComplex& K, int up_to)
{
    json j = to_json(betti_numbers(K, up_to));
    j["euler"] = K.euler_characteristic();
    j["counts"] = counts_json(K);
    return j;
}

inline json to_json(const ScaleWindow<double>& w)
{
    json j;
    j["lower"] = w.lower;
    j["upper"] = w.upper;
    j["upper_inclusive"] = w.upper_inclusive;
    j["zeta"] = w.zeta;
    j["empty"] = w.empty;
    return j;
}

inline std::string to_string(Provenance p)
{
    return p == Provenance::certified ? "certified" : "derived-bound";
}

inline json to_json(const Constant& c)
{
    return json{{"value", c.value}, {"provenance", to_string(c.provenance)}};
}

inline json to_json(const ConstantsReport& c)
{
    json j;
    j["rho"] = to_json(c.rho);
    j["kappa_sup"] = c.kappa_sup ? to_json(*c.kappa_sup) : json(nullptr);
    j["tau"] = c.tau ? to_json(*c.tau) : json(nullptr);
    j["delta"] = to_json(c.delta);
    return j;
}

inline json to_json(const Inequality& i)
{
    return json{{"name", i.name},   {"lhs", i.lhs},
                {"rhs", i.rhs},     {"strict", i.strict},
                {"margin", i.margin()}, {"required_margin", i.required_margin},
                {"holds", i.holds()}};
}

inline json to_json(const VerifierReport& r)
{
    json j;
    j["beta"] = r.beta;
    j["zeta"] = r.zeta;
    j["fineness"] = r.fineness;
    j["passed"] = r.passed();
    j["hypotheses"] = json::array();
    for (const auto& i : r.hypotheses)
        j["hypotheses"].push_back(to_json(i));
    j["checks"] = json::array();
    for (const auto& i : r.checks)
        j["checks"].push_back(to_json(i));
    j["failures"] = r.failures;
    return j;
}

inline json to_json(const CircumBoundReport& r)
{
    return json{{"diam", r.diam},     {"radius", r.radius},
                {"ratio", std::isfinite(r.ratio) ? json(r.ratio) : json(nullptr)},
                {"pass", r.pass},     {"in_hypothesis", r.in_hypothesis},
                {"flags", r.flags}};
}

inline json to_json(const CampaignReport& r)
{
    return json{{"name", r.name},         {"trials", r.trials},
                {"skipped", r.skipped},   {"failures", r.failures},
                {"worst_excess", std::isfinite(r.worst) ? json(r.worst) : json(nullptr)},
                {"pass", r.pass()}};
}

inline json to_json(const DistortionReport& r)
{
    return json{{"xi", r.xi},
                {"threshold", r.threshold},
                {"pairs", r.pairs},
                {"max_ratio", r.max_ratio},
                {"worst_ratio_excess", r.worst_ratio_excess},
                {"worst_chord_excess", r.worst_chord_excess},
                {"pass", r.pass}};
}

} // namespace ripsrecon::io
