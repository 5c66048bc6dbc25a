#pragma once

/**
 * Abstract simplicial complexes and the Vietoris-Rips construction.
 *
 * Simplices are strictly increasing vertex tuples. Storage is one flat array
 * per dimension, rows kept in lexicographic order so lookups are binary
 * searches and every traversal order is deterministic.
 *
 * NOTE: the Rips threshold is strict. An edge {i, j} exists iff d(i, j) < beta,
 * so points at distance exactly beta are not joined. Many TDA packages use <=.
 */

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "metric.hpp"

namespace ripsrecon {

using Vertex = std::uint32_t;
using Simplex = std::vector<Vertex>;

/// Complex-size guardrail used by rips_complex unless the caller overrides it.
inline constexpr std::size_t kDefaultSimplexLimit = 50'000'000;

namespace detail {

/// Sorts fixed-width rows of `flat` lexicographically and drops duplicates.
inline void sort_unique_rows(std::vector<Vertex>& flat, std::size_t width)
{
    const std::size_t rows = flat.size() / width;
    if (width == 1)
    {
        std::sort(flat.begin(), flat.end());
        flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
        return;
    }
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto row = [&](std::size_t r) { return flat.begin() + static_cast<std::ptrdiff_t>(r * width); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(row(a), row(a) + width, row(b), row(b) + width);
    });
    std::vector<Vertex> out;
    out.reserve(flat.size());
    for (std::size_t r = 0; r < rows; ++r)
    {
        auto it = row(order[r]);
        if (r > 0 && std::equal(it, it + width, out.end() - static_cast<std::ptrdiff_t>(width)))
            continue;
        out.insert(out.end(), it, it + width);
    }
    flat = std::move(out);
}

inline bool strictly_increasing(std::span<const Vertex> s)
{
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i - 1] >= s[i])
            return false;
    return true;
}

inline Simplex canonical(std::span<const Vertex> s)
{
    Simplex c(s.begin(), s.end());
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

} // namespace detail

class ComplexBuilder;

/**
 * Downward-closed set of simplices up to dimension max_dim.
 *
 * A complex built by rips_complex remembers that it is the flag complex of
 * its 1-skeleton. Membership queries on such a complex answer for the full
 * (uncapped) flag complex: a vertex set is a simplex iff all its pairs are
 * edges, even when it is larger than max_dim + 1.
 */
class SimplicialComplex
{
public:
    SimplicialComplex() = default;

    /// Closure of `generators` (faces above max_dim are dropped and recorded as truncation).
    static SimplicialComplex from_simplices(const std::vector<Simplex>& generators, int max_dim);

    int max_dim() const { return max_dim_; }

    /// Highest dimension with at least one stored simplex; -1 when empty.
    int dimension() const
    {
        for (int k = static_cast<int>(cells_.size()) - 1; k >= 0; --k)
            if (!cells_[k].empty())
                return k;
        return -1;
    }

    std::size_t count(int k) const
    {
        if (k < 0 || k >= static_cast<int>(cells_.size()))
            return 0;
        return cells_[k].size() / static_cast<std::size_t>(k + 1);
    }

    std::size_t size() const
    {
        std::size_t n = 0;
        for (int k = 0; k < static_cast<int>(cells_.size()); ++k)
            n += count(k);
        return n;
    }

    bool empty() const { return count(0) == 0; }

    std::span<const Vertex> simplex(int k, std::size_t i) const
    {
        const auto w = static_cast<std::size_t>(k + 1);
        return {cells_[k].data() + i * w, w};
    }

    /// Sorted vertex ids.
    std::span<const Vertex> vertices() const
    {
        if (cells_.empty())
            return {};
        return cells_[0];
    }

    /// Position of v in vertices(), if present.
    std::optional<std::size_t> vertex_position(Vertex v) const
    {
        const auto vs = vertices();
        if (v < vs.size() && vs[v] == v)
            return v;
        auto it = std::lower_bound(vs.begin(), vs.end(), v);
        if (it == vs.end() || *it != v)
            return std::nullopt;
        return static_cast<std::size_t>(it - vs.begin());
    }

    /// Row index of a stored simplex (input must be strictly increasing).
    std::optional<std::size_t> index_of(std::span<const Vertex> s) const
    {
        if (s.empty())
            return std::nullopt;
        const int k = static_cast<int>(s.size()) - 1;
        if (k >= static_cast<int>(cells_.size()))
            return std::nullopt;
        const std::size_t n = count(k);
        std::size_t lo = 0, hi = n;
        while (lo < hi)
        {
            const std::size_t mid = (lo + hi) / 2;
            auto row = simplex(k, mid);
            if (std::lexicographical_compare(row.begin(), row.end(), s.begin(), s.end()))
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo < n && std::ranges::equal(simplex(k, lo), s))
            return lo;
        return std::nullopt;
    }

    bool has_edge(Vertex a, Vertex b) const
    {
        if (a == b)
            return vertex_position(a).has_value();
        auto pa = vertex_position(a);
        if (!pa)
            return false;
        const auto& nb = neighbors_[*pa];
        return std::binary_search(nb.begin(), nb.end(), b);
    }

    /// Sorted neighbour ids of the vertex at position `pos`.
    std::span<const Vertex> neighbors_at(std::size_t pos) const { return neighbors_[pos]; }

    /// Membership for an arbitrary vertex set (any order, duplicates allowed).
    bool contains(std::span<const Vertex> s) const
    {
        const Simplex c = detail::canonical(s);
        if (c.empty())
            return false;
        if (flag_)
        {
            for (std::size_t i = 0; i < c.size(); ++i)
            {
                if (!vertex_position(c[i]))
                    return false;
                for (std::size_t j = i + 1; j < c.size(); ++j)
                    if (!has_edge(c[i], c[j]))
                        return false;
            }
            return true;
        }
        return index_of(c).has_value();
    }

    /// True when this complex was constructed as the flag complex of its 1-skeleton.
    bool flag_construction() const { return flag_; }

    /// True when no simplex was dropped by the max_dim cap.
    bool complete() const { return complete_; }

    /// Checks the flag property by brute force: every clique of the 1-skeleton
    /// with at most max_dim + 1 vertices is stored.
    bool is_flag() const;

    /// Dimension m if every maximal simplex has dimension m.
    std::optional<int> pure_dimension() const
    {
        const auto maxi = maximal_simplices();
        if (maxi.empty())
            return std::nullopt;
        const std::size_t m = maxi.front().size();
        for (const auto& s : maxi)
            if (s.size() != m)
                return std::nullopt;
        return static_cast<int>(m) - 1;
    }

    std::vector<Simplex> maximal_simplices() const
    {
        std::vector<Simplex> out;
        const int top = dimension();
        std::vector<char> covered;
        for (int k = 0; k <= top; ++k)
        {
            covered.assign(count(k), 0);
            if (k + 1 <= top)
            {
                Simplex face;
                for (std::size_t i = 0; i < count(k + 1); ++i)
                {
                    auto s = simplex(k + 1, i);
                    for (std::size_t drop = 0; drop < s.size(); ++drop)
                    {
                        face.clear();
                        for (std::size_t t = 0; t < s.size(); ++t)
                            if (t != drop)
                                face.push_back(s[t]);
                        covered[*index_of(face)] = 1;
                    }
                }
            }
            for (std::size_t i = 0; i < count(k); ++i)
                if (!covered[i])
                {
                    auto s = simplex(k, i);
                    out.emplace_back(s.begin(), s.end());
                }
        }
        return out;
    }

    /// Alternating sum of the stored simplex counts.
    long long euler_characteristic() const
    {
        long long chi = 0;
        for (int k = 0; k <= dimension(); ++k)
            chi += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(count(k));
        return chi;
    }

    /// Stored-simplex inclusion in `other`, dimension by dimension.
    bool is_subcomplex_of(const SimplicialComplex& other) const
    {
        for (int k = 0; k <= dimension(); ++k)
            for (std::size_t i = 0; i < count(k); ++i)
                if (!other.index_of(simplex(k, i)))
                    return false;
        return true;
    }

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b)
    {
        if (a.dimension() != b.dimension())
            return false;
        for (int k = 0; k <= a.dimension(); ++k)
            if (a.cells_[k] != b.cells_[k])
                return false;
        return true;
    }

private:
    friend class ComplexBuilder;

    void finalize()
    {
        for (std::size_t k = 0; k < cells_.size(); ++k)
            detail::sort_unique_rows(cells_[k], k + 1);
        neighbors_.assign(count(0), {});
        for (std::size_t i = 0; i < count(1); ++i)
        {
            auto e = simplex(1, i);
            neighbors_[*vertex_position(e[0])].push_back(e[1]);
            neighbors_[*vertex_position(e[1])].push_back(e[0]);
        }
        for (auto& nb : neighbors_)
            std::sort(nb.begin(), nb.end());
    }

    std::vector<std::vector<Vertex>> cells_;
    std::vector<std::vector<Vertex>> neighbors_;
    int max_dim_ = 0;
    bool flag_ = false;
    bool complete_ = true;
};

/// Accumulates simplices (with all their faces) and produces a SimplicialComplex.
class ComplexBuilder
{
public:
    explicit ComplexBuilder(int max_dim)
    {
        detail::require(max_dim >= 0, "max_dim must be non-negative");
        result_.max_dim_ = max_dim;
        result_.cells_.resize(static_cast<std::size_t>(max_dim) + 1);
    }

    /// Adds `s` (strictly increasing) without its faces. Caller guarantees closure.
    void add_unchecked(std::span<const Vertex> s)
    {
        auto& dst = result_.cells_[s.size() - 1];
        dst.insert(dst.end(), s.begin(), s.end());
    }

    /// Adds `s` and all of its faces up to max_dim.
    void add_with_faces(std::span<const Vertex> s)
    {
        const Simplex c = detail::canonical(s);
        detail::require(!c.empty(), "empty simplex");
        const std::size_t cap = static_cast<std::size_t>(result_.max_dim_) + 1;
        if (c.size() > cap)
            result_.complete_ = false;
        const std::size_t top = std::min(c.size(), cap);
        // enumerate every subset of size 1..top via index combinations
        std::vector<std::size_t> idx;
        Simplex face;
        for (std::size_t w = 1; w <= top; ++w)
        {
            idx.resize(w);
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            while (true)
            {
                face.clear();
                for (std::size_t t : idx)
                    face.push_back(c[t]);
                add_unchecked(face);
                std::size_t pos = w;
                while (pos > 0 && idx[pos - 1] == c.size() - w + pos - 1)
                    --pos;
                if (pos == 0)
                    break;
                ++idx[pos - 1];
                for (std::size_t t = pos; t < w; ++t)
                    idx[t] = idx[t - 1] + 1;
            }
        }
    }

    void mark_flag() { result_.flag_ = true; }
    void mark_truncated() { result_.complete_ = false; }

    SimplicialComplex build() &&
    {
        result_.finalize();
        return std::move(result_);
    }

private:
    SimplicialComplex result_;
};

inline SimplicialComplex SimplicialComplex::from_simplices(const std::vector<Simplex>& generators,
                                                           int max_dim)
{
    ComplexBuilder b(max_dim);
    for (const auto& s : generators)
        b.add_with_faces(s);
    return std::move(b).build();
}

// ---------------------------------------------------------------------------
// Clique expansion
// ---------------------------------------------------------------------------

namespace detail {

/// Degeneracy order of a graph given by sorted adjacency lists (smallest-last).
inline std::vector<Vertex> degeneracy_order(const std::vector<std::vector<Vertex>>& adj)
{
    const std::size_t n = adj.size();
    std::vector<std::size_t> deg(n);
    std::size_t max_deg = 0;
    for (std::size_t v = 0; v < n; ++v)
    {
        deg[v] = adj[v].size();
        max_deg = std::max(max_deg, deg[v]);
    }
    std::vector<std::vector<Vertex>> bucket(max_deg + 1);
    for (std::size_t v = 0; v < n; ++v)
        bucket[deg[v]].push_back(static_cast<Vertex>(v));
    std::vector<char> removed(n, 0);
    std::vector<Vertex> order;
    order.reserve(n);
    std::size_t d = 0;
    while (order.size() < n)
    {
        d = std::min(d, max_deg);
        while (bucket[d].empty())
            ++d;
        const Vertex v = bucket[d].back();
        bucket[d].pop_back();
        if (removed[v] || deg[v] != d)
            continue; // stale entry
        removed[v] = 1;
        order.push_back(v);
        for (Vertex u : adj[v])
            if (!removed[u])
            {
                --deg[u];
                bucket[deg[u]].push_back(u);
                d = std::min(d, deg[u]);
            }
    }
    return order;
}

/**
 * Enumerates all cliques of size <= cap of the graph, each reported once as a
 * sorted vertex tuple. Edges are oriented along the degeneracy order so every
 * clique is generated from its earliest vertex by intersecting forward
 * neighbourhoods. Returns false when a clique larger than cap exists.
 */
template <class Sink>
bool enumerate_cliques(const std::vector<std::vector<Vertex>>& adj, std::size_t cap, Sink&& sink)
{
    const std::size_t n = adj.size();
    const auto order = degeneracy_order(adj);
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i)
        rank[order[i]] = i;
    // forward neighbours, sorted by rank
    std::vector<std::vector<std::size_t>> fwd(n);
    for (std::size_t v = 0; v < n; ++v)
    {
        for (Vertex u : adj[v])
            if (rank[u] > rank[v])
                fwd[rank[v]].push_back(rank[u]);
        std::sort(fwd[rank[v]].begin(), fwd[rank[v]].end());
    }
    bool complete = true;
    std::vector<std::size_t> clique;
    Simplex sorted;
    auto emit = [&] {
        sorted.clear();
        for (std::size_t r : clique)
            sorted.push_back(order[r]);
        std::sort(sorted.begin(), sorted.end());
        sink(std::span<const Vertex>(sorted));
    };
    auto recurse = [&](auto& self, const std::vector<std::size_t>& cand) -> void {
        for (std::size_t i = 0; i < cand.size(); ++i)
        {
            const std::size_t u = cand[i];
            clique.push_back(u);
            emit();
            std::vector<std::size_t> next;
            std::set_intersection(cand.begin() + static_cast<std::ptrdiff_t>(i) + 1, cand.end(),
                                  fwd[u].begin(), fwd[u].end(), std::back_inserter(next));
            if (!next.empty())
            {
                if (clique.size() < cap)
                    self(self, next);
                else
                    complete = false;
            }
            clique.pop_back();
        }
    };
    for (std::size_t r = 0; r < n; ++r)
    {
        clique.assign(1, r);
        emit();
        if (!fwd[r].empty())
        {
            if (cap > 1)
                recurse(recurse, fwd[r]);
            else
                complete = false;
        }
    }
    return complete;
}

} // namespace detail

inline bool SimplicialComplex::is_flag() const
{
    if (flag_)
        return true;
    const auto vs = vertices();
    std::vector<std::vector<Vertex>> adj(vs.size());
    for (std::size_t p = 0; p < vs.size(); ++p)
        for (Vertex u : neighbors_[p])
            adj[p].push_back(static_cast<Vertex>(*vertex_position(u)));
    bool ok = true;
    Simplex ids;
    detail::enumerate_cliques(adj, static_cast<std::size_t>(max_dim_) + 1,
                              [&](std::span<const Vertex> c) {
                                  if (!ok)
                                      return;
                                  ids.clear();
                                  for (Vertex p : c)
                                      ids.push_back(vs[p]);
                                  std::sort(ids.begin(), ids.end());
                                  if (!index_of(ids))
                                      ok = false;
                              });
    return ok;
}

/**
 * Vietoris-Rips complex: the flag complex of {(i, j) : d(i, j) < beta},
 * expanded to dimension max_dim. Vertices are 0..n-1.
 */
inline SimplicialComplex rips_complex(const FiniteMetricSpace& ms, double beta, int max_dim,
                                      std::size_t simplex_limit = kDefaultSimplexLimit)
{
    detail::require(beta > 0.0, "rips_complex: beta must be positive");
    detail::require(max_dim >= 0, "rips_complex: max_dim must be non-negative");
    const std::size_t n = ms.size();
    std::vector<std::vector<Vertex>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto row = ms.row(i);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && row[j] < beta)
                adj[i].push_back(static_cast<Vertex>(j));
    }
    ComplexBuilder b(max_dim);
    b.mark_flag();
    std::size_t produced = 0;
    const bool complete = detail::enumerate_cliques(
        adj, static_cast<std::size_t>(max_dim) + 1, [&](std::span<const Vertex> c) {
            if (++produced > simplex_limit)
                throw PreconditionError("rips_complex: more than " + std::to_string(simplex_limit) +
                                        " simplices; lower beta or max_dim");
            b.add_unchecked(c);
        });
    if (!complete)
        b.mark_truncated();
    return std::move(b).build();
}

/// Whether the 1-skeleton is connected. The empty complex counts as disconnected.
inline bool is_connected(const SimplicialComplex& K)
{
    const auto vs = K.vertices();
    if (vs.empty())
        return false;
    std::vector<char> seen(vs.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty())
    {
        const std::size_t p = stack.back();
        stack.pop_back();
        for (Vertex u : K.neighbors_at(p))
        {
            const std::size_t q = *K.vertex_position(u);
            if (!seen[q])
            {
                seen[q] = 1;
                ++reached;
                stack.push_back(q);
            }
        }
    }
    return reached == vs.size();
}

/// Number of connected components of the 1-skeleton.
inline std::size_t connected_components(const SimplicialComplex& K)
{
    const auto vs = K.vertices();
    std::vector<std::size_t> parent(vs.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t comps = vs.size();
    for (std::size_t i = 0; i < K.count(1); ++i)
    {
        auto e = K.simplex(1, i);
        const auto a = find(*K.vertex_position(e[0]));
        const auto c = find(*K.vertex_position(e[1]));
        if (a != c)
        {
            parent[a] = c;
            --comps;
        }
    }
    return comps;
}

/// Cycle graph on vertices 0..k-1: a triangulation of the circle (k >= 3).
inline SimplicialComplex cycle_complex(std::size_t k)
{
    detail::require(k >= 3, "cycle_complex needs at least 3 vertices");
    std::vector<Simplex> edges;
    for (std::size_t i = 0; i < k; ++i)
        edges.push_back(detail::canonical(
            Simplex{static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % k)}));
    return SimplicialComplex::from_simplices(edges, 1);
}

} // namespace ripsrecon
