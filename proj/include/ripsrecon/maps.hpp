#pragma once

/**
 * Simplicial maps, contiguity, barycentric subdivision, and the combinatorial
 * conditions under which f : K -> L and g : sd K -> L agree up to homotopy.
 */

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "complex.hpp"

namespace ripsrecon {

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;
using VertexMap = std::unordered_map<Vertex, Vertex>;

inline ComplexPtr share(SimplicialComplex K)
{
    return std::make_shared<const SimplicialComplex>(std::move(K));
}

namespace detail {

inline bool same_complex(const ComplexPtr& a, const ComplexPtr& b)
{
    return a == b || (a && b && *a == *b);
}

} // namespace detail

struct SimplicialCheck;
class SimplicialMap;
SimplicialCheck check_simplicial(const VertexMap&, const ComplexPtr&, const ComplexPtr&);

/// Vertex map between two complexes whose simplex images have been verified.
class SimplicialMap
{
public:
    const ComplexPtr& source() const { return source_; }
    const ComplexPtr& target() const { return target_; }

    Vertex operator()(Vertex v) const { return image_[*source_->vertex_position(v)]; }

    /// Image of a simplex as a canonical (sorted, de-duplicated) vertex set.
    Simplex image(std::span<const Vertex> s) const
    {
        Simplex out;
        out.reserve(s.size());
        for (Vertex v : s)
            out.push_back((*this)(v));
        return detail::canonical(out);
    }

    /// Images aligned with source()->vertices().
    const std::vector<Vertex>& images() const { return image_; }

    /// Composite this o inner; simplicial because both factors are.
    SimplicialMap after(const SimplicialMap& inner) const
    {
        if (!detail::same_complex(inner.target_, source_))
            throw PreconditionError("compose: inner target is not the outer source");
        SimplicialMap m;
        m.source_ = inner.source_;
        m.target_ = target_;
        m.image_.reserve(inner.image_.size());
        for (Vertex w : inner.image_)
            m.image_.push_back((*this)(w));
        return m;
    }

private:
    friend SimplicialCheck check_simplicial(const VertexMap&, const ComplexPtr&, const ComplexPtr&);

    ComplexPtr source_, target_;
    std::vector<Vertex> image_;
};

/// Either a validated map, or the first source simplex whose image is not in the target.
struct SimplicialCheck
{
    std::optional<SimplicialMap> map;
    Simplex violation;

    bool ok() const { return map.has_value(); }
};

/**
 * Validates that `f` induces a simplicial map K -> L.
 *
 * Throws PreconditionError if f is not defined on some vertex of K. When L is
 * a flag complex only vertices and edges of K need checking, because a vertex
 * set is a simplex of L iff all its pairs are.
 */
inline SimplicialCheck check_simplicial(const VertexMap& f, const ComplexPtr& K, const ComplexPtr& L)
{
    SimplicialMap m;
    m.source_ = K;
    m.target_ = L;
    for (Vertex v : K->vertices())
    {
        auto it = f.find(v);
        if (it == f.end())
            throw PreconditionError("check_simplicial: vertex map is not defined on vertex " +
                                    std::to_string(v));
        m.image_.push_back(it->second);
    }
    const int top = L->flag_construction() ? std::min(1, K->dimension()) : K->dimension();
    for (int k = 0; k <= top; ++k)
        for (std::size_t i = 0; i < K->count(k); ++i)
        {
            auto s = K->simplex(k, i);
            if (!L->contains(m.image(s)))
                return {std::nullopt, Simplex(s.begin(), s.end())};
        }
    return {std::move(m), {}};
}

inline SimplicialCheck check_simplicial(const VertexMap& f, const SimplicialComplex& K,
                                        const SimplicialComplex& L)
{
    return check_simplicial(f, share(K), share(L));
}

inline VertexMap identity_map(const SimplicialComplex& K)
{
    VertexMap f;
    for (Vertex v : K.vertices())
        f[v] = v;
    return f;
}

struct ContiguityResult
{
    bool contiguous = true;
    Simplex witness; ///< source simplex with phi(s) U psi(s) not in the target
};

/**
 * phi and psi are contiguous iff phi(s) U psi(s) is a simplex of the target for
 * every source simplex s. For a flag target, checking vertices and edges of
 * the source is equivalent.
 */
inline ContiguityResult contiguous(const SimplicialMap& phi, const SimplicialMap& psi)
{
    if (!detail::same_complex(phi.source(), psi.source()) ||
        !detail::same_complex(phi.target(), psi.target()))
        throw PreconditionError("contiguous: maps have different source or target complexes");
    const auto& K = *phi.source();
    const auto& L = *phi.target();
    const int top = L.flag_construction() ? std::min(1, K.dimension()) : K.dimension();
    Simplex u;
    for (int k = 0; k <= top; ++k)
        for (std::size_t i = 0; i < K.count(k); ++i)
        {
            auto s = K.simplex(k, i);
            u.clear();
            for (Vertex v : s)
            {
                u.push_back(phi(v));
                u.push_back(psi(v));
            }
            if (!L.contains(u))
                return {false, Simplex(s.begin(), s.end())};
        }
    return {};
}

// ---------------------------------------------------------------------------
// Barycentric subdivision
// ---------------------------------------------------------------------------

/**
 * sd K. Vertex v of the subdivision stands for the barycenter of
 * base_simplex(v); ids run dimension-major, lexicographic within a dimension,
 * so a face chain listed by increasing dimension is already sorted.
 */
class SubdivisionComplex
{
public:
    explicit SubdivisionComplex(ComplexPtr base) : base_(std::move(base))
    {
        const auto& K = *base_;
        const int top = K.dimension();
        offset_.assign(static_cast<std::size_t>(std::max(top, 0)) + 2, 0);
        for (int k = 0; k <= top; ++k)
            offset_[k + 1] = offset_[k] + K.count(k);

        ComplexBuilder b(std::max(top, 0));
        if (top < 0)
        {
            complex_ = share(std::move(b).build());
            return;
        }
        detail::require(top < 31, "barycentric_subdivision: base dimension too large");
        // Each chain s_0 < ... < s_m is generated once, walking down from its top s_m
        // through every proper face.
        std::vector<Vertex> chain;
        auto descend = [&](auto& self, int k, std::size_t idx) -> void {
            chain.push_back(static_cast<Vertex>(offset_[k] + idx));
            Simplex sorted(chain.rbegin(), chain.rend());
            b.add_unchecked(sorted);
            const auto s = K.simplex(k, idx);
            const std::uint32_t full = (std::uint32_t{1} << s.size()) - 1;
            Simplex face;
            for (std::uint32_t mask = 1; mask < full; ++mask)
            {
                face.clear();
                for (std::size_t t = 0; t < s.size(); ++t)
                    if (mask & (std::uint32_t{1} << t))
                        face.push_back(s[t]);
                self(self, static_cast<int>(face.size()) - 1, *K.index_of(face));
            }
            chain.pop_back();
        };
        for (int k = 0; k <= top; ++k)
            for (std::size_t i = 0; i < K.count(k); ++i)
                descend(descend, k, i);
        complex_ = share(std::move(b).build());
    }

    const ComplexPtr& base() const { return base_; }
    const ComplexPtr& complex() const { return complex_; }

    /// Subdivision vertex representing the barycenter of `s` (a simplex of the base).
    Vertex vertex_of(std::span<const Vertex> s) const
    {
        const Simplex c = detail::canonical(s);
        auto idx = base_->index_of(c);
        if (!idx)
            throw PreconditionError("vertex_of: not a simplex of the base complex");
        return static_cast<Vertex>(offset_[c.size() - 1] + *idx);
    }

    std::span<const Vertex> base_simplex(Vertex v) const
    {
        std::size_t k = 0;
        while (offset_[k + 1] <= v)
            ++k;
        return base_->simplex(static_cast<int>(k), v - offset_[k]);
    }

private:
    ComplexPtr base_;
    ComplexPtr complex_;
    std::vector<std::size_t> offset_;
};

inline SubdivisionComplex barycentric_subdivision(const ComplexPtr& K)
{
    return SubdivisionComplex(K);
}

inline SubdivisionComplex barycentric_subdivision(const SimplicialComplex& K)
{
    return SubdivisionComplex(share(K));
}

// ---------------------------------------------------------------------------
// Commuting-diagram conditions
// ---------------------------------------------------------------------------

struct HomotopyConditionReport
{
    bool holds = true;
    std::optional<Vertex> condition_a_witness; ///< base vertex v with g(v) != f(v)
    std::optional<Simplex> condition_b_witness; ///< base simplex s with f(s) U g(s^) not in L
    std::size_t simplices_checked = 0;
};

/**
 * Checks, for f : K -> L and g : sd K -> L,
 *   (a) g(v) = f(v) for every vertex v of K, and
 *   (b) f(s) U {g(barycenter of s)} is a simplex of L for every simplex s of K.
 * These imply |g| ~ |f| o h. Throws PreconditionError when L is not flag or K
 * is not pure.
 */
inline HomotopyConditionReport check_homotopy_conditions(const SimplicialMap& f,
                                                         const SimplicialMap& g,
                                                         const SubdivisionComplex& sd,
                                                         const ComplexPtr& L)
{
    const auto& K = *sd.base();
    if (!detail::same_complex(f.source(), sd.base()))
        throw PreconditionError("check_homotopy_conditions: f is not defined on K");
    if (!detail::same_complex(g.source(), sd.complex()))
        throw PreconditionError("check_homotopy_conditions: g is not defined on sd K");
    if (!detail::same_complex(f.target(), L) || !detail::same_complex(g.target(), L))
        throw PreconditionError("check_homotopy_conditions: f and g must map into L");
    if (!L->is_flag())
        throw PreconditionError("check_homotopy_conditions: L is not a flag complex");
    if (!K.pure_dimension())
        throw PreconditionError("check_homotopy_conditions: K is not a pure complex");

    HomotopyConditionReport r;
    for (Vertex v : K.vertices())
    {
        const Vertex single[] = {v};
        if (g(sd.vertex_of(single)) != f(v))
        {
            r.holds = false;
            r.condition_a_witness = v;
            break;
        }
    }
    Simplex u;
    for (int k = 0; k <= K.dimension() && !r.condition_b_witness; ++k)
        for (std::size_t i = 0; i < K.count(k); ++i)
        {
            auto s = K.simplex(k, i);
            ++r.simplices_checked;
            u = f.image(s);
            u.push_back(g(sd.vertex_of(s)));
            if (!L->contains(u))
            {
                r.holds = false;
                r.condition_b_witness = Simplex(s.begin(), s.end());
                break;
            }
        }
    return r;
}

} // namespace ripsrecon
