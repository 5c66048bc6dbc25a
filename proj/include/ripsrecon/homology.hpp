#pragma once

/**
 * Simplicial homology over GF(2).
 *
 * Boundary matrices are column-reduced sparsely (columns are sorted row-index
 * lists; adding two columns is a symmetric difference). Dimensions are
 * processed from the top down so the pivots of d_{k+1} clear the matching
 * columns of d_k before they are touched.
 */

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "complex.hpp"

namespace ripsrecon {

struct BettiVector
{
    std::vector<std::size_t> betti;
    std::vector<std::string> flags; ///< non-empty when some entry is only an upper bound

    bool exact() const { return flags.empty(); }
    friend bool operator==(const BettiVector& a, const BettiVector& b) { return a.betti == b.betti; }
};

namespace detail {

using Column = std::vector<std::uint32_t>;

/// Columns of d_k: each k-simplex as sorted row indices of its (k-1)-faces.
inline std::vector<Column> boundary_columns(const SimplicialComplex& K, int k)
{
    std::vector<Column> cols(K.count(k));
    Simplex face;
    for (std::size_t j = 0; j < cols.size(); ++j)
    {
        auto s = K.simplex(k, j);
        cols[j].reserve(s.size());
        for (std::size_t drop = 0; drop < s.size(); ++drop)
        {
            face.clear();
            for (std::size_t t = 0; t < s.size(); ++t)
                if (t != drop)
                    face.push_back(s[t]);
            cols[j].push_back(static_cast<std::uint32_t>(*K.index_of(face)));
        }
        std::sort(cols[j].begin(), cols[j].end());
    }
    return cols;
}

/**
 * Rank of a GF(2) matrix given by columns, by the standard left-to-right
 * reduction. Columns flagged in `skip` are known to reduce to zero. On
 * return `pivot_rows[i]` is set for every row that is the lowest entry of a
 * reduced column.
 */
inline std::size_t reduce_rank(std::vector<Column>& cols, std::size_t rows,
                               const std::vector<char>& skip, std::vector<char>& pivot_rows)
{
    constexpr std::uint32_t none = UINT32_MAX;
    std::vector<std::uint32_t> owner(rows, none);
    pivot_rows.assign(rows, 0);
    std::size_t rank = 0;
    Column tmp;
    for (std::size_t j = 0; j < cols.size(); ++j)
    {
        if (!skip.empty() && skip[j])
        {
            cols[j].clear();
            continue;
        }
        Column& c = cols[j];
        while (!c.empty())
        {
            const std::uint32_t low = c.back();
            const std::uint32_t p = owner[low];
            if (p == none)
            {
                owner[low] = static_cast<std::uint32_t>(j);
                pivot_rows[low] = 1;
                ++rank;
                break;
            }
            tmp.clear();
            std::set_symmetric_difference(c.begin(), c.end(), cols[p].begin(), cols[p].end(),
                                          std::back_inserter(tmp));
            c.swap(tmp);
        }
    }
    return rank;
}

} // namespace detail

/**
 * b_0..b_up_to of K over GF(2): b_k = n_k - rank d_k - rank d_{k+1}.
 *
 * Exact when K holds every simplex up to dimension up_to + 1. If the
 * construction cap cut off simplices there, the affected entries are upper
 * bounds and a flag says so.
 */
inline BettiVector betti_numbers(const SimplicialComplex& K, int up_to)
{
    detail::require(up_to >= 0, "betti_numbers: up_to must be non-negative");
    BettiVector out;
    const int top = std::min(up_to + 1, K.dimension());
    std::vector<std::size_t> rank(static_cast<std::size_t>(up_to) + 2, 0);
    std::vector<char> clear_next; // columns of d_k cleared by pivots of d_{k+1}
    for (int k = top; k >= 1; --k)
    {
        auto cols = detail::boundary_columns(K, k);
        std::vector<char> pivots;
        rank[k] = detail::reduce_rank(cols, K.count(k - 1), clear_next, pivots);
        clear_next = std::move(pivots);
    }
    out.betti.resize(static_cast<std::size_t>(up_to) + 1);
    for (int k = 0; k <= up_to; ++k)
    {
        const std::size_t n = K.count(k);
        out.betti[k] = n - rank[k] - rank[k + 1];
        if (!K.complete() && k + 1 > K.max_dim())
            out.flags.push_back("b_" + std::to_string(k) +
                                " is an upper bound only: complex truncated at dimension " +
                                std::to_string(K.max_dim()));
    }
    return out;
}

/// Alternating sum of simplex counts (meaningful when K is not truncated).
inline long long euler_characteristic(const SimplicialComplex& K)
{
    return K.euler_characteristic();
}

} // namespace ripsrecon
