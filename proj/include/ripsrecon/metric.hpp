#pragma once

/**
 * Finite metric spaces, point clouds, Hausdorff distance, correspondences and
 * their distortion.
 *
 * Gromov-Hausdorff distance is never computed exactly. Every GH statement in
 * this library is witnessed by an explicit correspondence, whose distortion
 * halved is an upper bound on d_GH.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "error.hpp"

namespace ripsrecon {

using Index = std::size_t;

/// Default slack for the triangle-inequality validation of distance matrices.
inline constexpr double kMetricTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Point clouds
// ---------------------------------------------------------------------------

/// Points of R^d, stored row-major.
class PointCloud
{
public:
    PointCloud() = default;

    explicit PointCloud(std::size_t dim) : dim_(dim) {}

    explicit PointCloud(const std::vector<std::vector<double>>& rows)
    {
        if (rows.empty())
            return;
        dim_ = rows.front().size();
        for (const auto& r : rows)
            push_back(r);
    }

    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return coords_.empty(); }

    std::span<const double> operator[](Index i) const
    {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<double> operator[](Index i) { return {coords_.data() + i * dim_, dim_}; }

    void push_back(std::span<const double> p)
    {
        if (dim_ == 0 && coords_.empty())
            dim_ = p.size();
        if (p.size() != dim_ || dim_ == 0)
            throw InputError("point has dimension " + std::to_string(p.size()) +
                             ", cloud has dimension " + std::to_string(dim_));
        for (double x : p)
            if (!std::isfinite(x))
                throw InputError("point coordinates must be finite");
        coords_.insert(coords_.end(), p.begin(), p.end());
    }
    void push_back(std::initializer_list<double> p)
    {
        push_back(std::span<const double>(p.begin(), p.size()));
    }

    const std::vector<double>& data() const { return coords_; }

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

inline double euclidean_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Finite metric spaces
// ---------------------------------------------------------------------------

/// How much of the metric axioms a distance matrix is checked against.
enum class MetricCheck
{
    full,      ///< entries, symmetry and all n^3 triangle inequalities
    structural ///< entries and symmetry; for matrices computed from a known metric
};

/**
 * Symmetric distance matrix over the labels 0..n-1.
 *
 * Validated on construction: finite non-negative entries, zero diagonal,
 * symmetry, and the triangle inequality up to `tolerance`. Violations throw
 * PreconditionError naming the offending indices.
 */
class FiniteMetricSpace
{
public:
    FiniteMetricSpace() = default;

    FiniteMetricSpace(std::size_t n, std::vector<double> row_major,
                      double tolerance = kMetricTolerance, MetricCheck check = MetricCheck::full)
        : n_(n), d_(std::move(row_major))
    {
        if (d_.size() != n_ * n_)
            throw PreconditionError("distance matrix must be n x n");
        validate(tolerance, check);
    }

    /// Builds the matrix by evaluating `dist(i, j)` for i < j.
    template <class DistanceFn>
    static FiniteMetricSpace from_function(std::size_t n, DistanceFn&& dist,
                                           MetricCheck check = MetricCheck::full,
                                           double tolerance = kMetricTolerance)
    {
        std::vector<double> d(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                d[i * n + j] = d[j * n + i] = dist(i, j);
        return FiniteMetricSpace(n, std::move(d), tolerance, check);
    }

    std::size_t size() const { return n_; }
    double operator()(Index i, Index j) const { return d_[i * n_ + j]; }
    std::span<const double> row(Index i) const { return {d_.data() + i * n_, n_}; }
    const std::vector<double>& data() const { return d_; }

private:
    void validate(double tol, MetricCheck check) const
    {
        auto fail = [](const std::string& what, Index i, Index j) {
            std::ostringstream os;
            os << "invalid distance matrix: " << what << " at (" << i << ", " << j << ")";
            throw PreconditionError(os.str());
        };
        for (std::size_t i = 0; i < n_; ++i)
        {
            if ((*this)(i, i) != 0.0)
                fail("non-zero diagonal", i, i);
            for (std::size_t j = 0; j < n_; ++j)
            {
                const double v = (*this)(i, j);
                if (!std::isfinite(v) || v < 0.0)
                    fail("negative or non-finite entry", i, j);
                if (std::abs(v - (*this)(j, i)) > tol)
                    fail("asymmetric entry", i, j);
            }
        }
        if (check == MetricCheck::structural)
            return;
        // d(i,j) <= d(i,k) + d(k,j) for all i, k, j; the inner loop is over j so
        // it vectorizes.
        std::vector<char> bad(n_);
        for (std::size_t i = 0; i < n_; ++i)
        {
            const double* ri = d_.data() + i * n_;
            for (std::size_t k = 0; k < n_; ++k)
            {
                const double dik = ri[k];
                const double* rk = d_.data() + k * n_;
                char any = 0;
                for (std::size_t j = 0; j < n_; ++j)
                    any |= static_cast<char>(ri[j] > dik + rk[j] + tol);
                if (any)
                {
                    for (std::size_t j = 0; j < n_; ++j)
                        if (ri[j] > dik + rk[j] + tol)
                        {
                            std::ostringstream os;
                            os << "invalid distance matrix: triangle inequality fails for ("
                               << i << ", " << k << ", " << j << ")";
                            throw PreconditionError(os.str());
                        }
                }
            }
        }
    }

    std::size_t n_ = 0;
    std::vector<double> d_;
};

/// Pairwise Euclidean distances (a metric by construction, so only structurally checked).
inline FiniteMetricSpace euclidean_metric(const PointCloud& pc)
{
    return FiniteMetricSpace::from_function(
        pc.size(), [&](Index i, Index j) { return euclidean_distance(pc[i], pc[j]); },
        MetricCheck::structural);
}

// ---------------------------------------------------------------------------
// Diameter and Hausdorff distance
// ---------------------------------------------------------------------------

/// Largest pairwise distance within `subset`; 0 for a singleton.
inline double diameter(const FiniteMetricSpace& ms, std::span<const Index> subset)
{
    if (subset.empty())
        throw PreconditionError("empty set has no diameter");
    for (Index i : subset)
        if (i >= ms.size())
            throw PreconditionError("diameter: index out of range");
    double d = 0.0;
    for (std::size_t a = 0; a < subset.size(); ++a)
        for (std::size_t b = a + 1; b < subset.size(); ++b)
            d = std::max(d, ms(subset[a], subset[b]));
    return d;
}

inline double diameter(const FiniteMetricSpace& ms)
{
    std::vector<Index> all(ms.size());
    for (Index i = 0; i < all.size(); ++i)
        all[i] = i;
    return diameter(ms, all);
}

/// max of the two directed max-min distances, for sets of sizes na and nb
/// with cross distances given by `cross(a, b)`.
template <class CrossDistanceFn>
double hausdorff_distance(std::size_t na, std::size_t nb, CrossDistanceFn&& cross)
{
    if (na == 0 || nb == 0)
        throw PreconditionError("hausdorff_distance: empty input");
    std::vector<double> best_b(nb, std::numeric_limits<double>::infinity());
    double h = 0.0;
    for (std::size_t a = 0; a < na; ++a)
    {
        double best_a = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < nb; ++b)
        {
            const double d = cross(a, b);
            best_a = std::min(best_a, d);
            best_b[b] = std::min(best_b[b], d);
        }
        h = std::max(h, best_a);
    }
    for (double v : best_b)
        h = std::max(h, v);
    return h;
}

/// One-sided max over a in A of min over b in B of |a - b|.
inline double hausdorff_directed(const PointCloud& A, const PointCloud& B)
{
    if (A.empty() || B.empty())
        throw PreconditionError("hausdorff_directed: empty input");
    const std::size_t d = A.dim();
    const double* pb = B.data().data();
    double worst = 0.0;
    for (Index a = 0; a < A.size(); ++a)
    {
        const auto pa = A[a];
        double best = std::numeric_limits<double>::infinity();
        for (Index b = 0; b < B.size(); ++b)
        {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k)
            {
                const double t = pa[k] - pb[b * d + k];
                s += t * t;
            }
            best = std::min(best, s);
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

inline double hausdorff_distance(const PointCloud& A, const PointCloud& B)
{
    if (!A.empty() && !B.empty() && A.dim() != B.dim())
        throw PreconditionError("hausdorff_distance: ambient dimensions differ");
    return hausdorff_distance(A.size(), B.size(),
                              [&](Index a, Index b) { return euclidean_distance(A[a], B[b]); });
}

inline double hausdorff_distance(const FiniteMetricSpace& ms, std::span<const Index> A,
                                 std::span<const Index> B)
{
    return hausdorff_distance(A.size(), B.size(),
                              [&](Index a, Index b) { return ms(A[a], B[b]); });
}

// ---------------------------------------------------------------------------
// Correspondences
// ---------------------------------------------------------------------------

/// Relation between index sets {0..nx-1} and {0..ny-1} covering both sides.
class Correspondence
{
public:
    using Pair = std::pair<Index, Index>;

    Correspondence(std::size_t nx, std::size_t ny, std::vector<Pair> pairs)
        : nx_(nx), ny_(ny), pairs_(std::move(pairs))
    {
        std::sort(pairs_.begin(), pairs_.end());
        pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
        std::vector<char> hit_x(nx_, 0), hit_y(ny_, 0);
        for (auto [i, j] : pairs_)
        {
            if (i >= nx_ || j >= ny_)
                throw PreconditionError("correspondence: index out of range");
            hit_x[i] = hit_y[j] = 1;
        }
        if (std::find(hit_x.begin(), hit_x.end(), 0) != hit_x.end())
            throw PreconditionError("correspondence: some point of X has no partner");
        if (std::find(hit_y.begin(), hit_y.end(), 0) != hit_y.end())
            throw PreconditionError("correspondence: some point of Y has no partner");
    }

    static Correspondence identity(std::size_t n)
    {
        std::vector<Pair> p(n);
        for (Index i = 0; i < n; ++i)
            p[i] = {i, i};
        return Correspondence(n, n, std::move(p));
    }

    std::size_t x_size() const { return nx_; }
    std::size_t y_size() const { return ny_; }
    const std::vector<Pair>& pairs() const { return pairs_; }

    /// Lowest-index partner in Y of x (pairs are kept sorted).
    Index first_partner_of_x(Index x) const
    {
        auto it = std::lower_bound(pairs_.begin(), pairs_.end(), Pair{x, 0});
        return it->second;
    }

    friend bool operator==(const Correspondence&, const Correspondence&) = default;

private:
    std::size_t nx_, ny_;
    std::vector<Pair> pairs_;
};

/// sup over pairs of pairs (x1,y1),(x2,y2) of |dX(x1,x2) - dY(y1,y2)|.
inline double correspondence_distortion(const Correspondence& C, const FiniteMetricSpace& X,
                                        const FiniteMetricSpace& Y)
{
    if (C.x_size() != X.size() || C.y_size() != Y.size())
        throw PreconditionError("correspondence_distortion: correspondence does not match spaces");
    const auto& p = C.pairs();
    double d = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a)
        for (std::size_t b = a + 1; b < p.size(); ++b)
            d = std::max(d, std::abs(X(p[a].first, p[b].first) - Y(p[a].second, p[b].second)));
    return d;
}

/// Half the distortion: an upper bound on d_GH(X, Y), not the exact value.
inline double gh_upper_bound(const Correspondence& C, const FiniteMetricSpace& X,
                             const FiniteMetricSpace& Y)
{
    return correspondence_distortion(C, X, Y) / 2.0;
}

/**
 * Nearest-neighbour correspondence {(x, nn_Y(x))} U {(nn_X(y), y)} with ties
 * broken toward the lowest index. `cross(x, y)` is the distance in the common
 * ambient metric.
 */
template <class CrossDistanceFn>
Correspondence nn_correspondence(std::size_t nx, std::size_t ny, CrossDistanceFn&& cross)
{
    if (nx == 0 || ny == 0)
        throw PreconditionError("nn_correspondence: empty input");
    std::vector<Index> nn_y(nx, 0), nn_x(ny, 0);
    std::vector<double> best_x(nx, std::numeric_limits<double>::infinity());
    std::vector<double> best_y(ny, std::numeric_limits<double>::infinity());
    for (Index x = 0; x < nx; ++x)
        for (Index y = 0; y < ny; ++y)
        {
            const double d = cross(x, y);
            if (d < best_x[x])
            {
                best_x[x] = d;
                nn_y[x] = y;
            }
            if (d < best_y[y])
            {
                best_y[y] = d;
                nn_x[y] = x;
            }
        }
    std::vector<Correspondence::Pair> pairs;
    pairs.reserve(nx + ny);
    for (Index x = 0; x < nx; ++x)
        pairs.emplace_back(x, nn_y[x]);
    for (Index y = 0; y < ny; ++y)
        pairs.emplace_back(nn_x[y], y);
    return Correspondence(nx, ny, std::move(pairs));
}

inline Correspondence nn_correspondence(const PointCloud& X, const PointCloud& Y)
{
    if (!X.empty() && !Y.empty() && X.dim() != Y.dim())
        throw PreconditionError("nn_correspondence: ambient dimensions differ");
    return nn_correspondence(X.size(), Y.size(),
                             [&](Index a, Index b) { return euclidean_distance(X[a], Y[b]); });
}

} // namespace ripsrecon
