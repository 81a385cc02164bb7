#ifndef TUBEREACH_ZONOTOPE_HPP_
#define TUBEREACH_ZONOTOPE_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace tubereach
{

/**
 * @brief Zonotope Z(c, G) = c + G [-1, 1]^q.
 *
 * Generators are the columns of G. A zonotope with q = 0 is the singleton {c}.
 * Zero generator columns are kept as-is so that generator counts are
 * predictable from the shapes of the inputs.
 */
class Zonotope
{
    public:

        Zonotope() = default;

        /// Singleton {center}.
        explicit Zonotope(Eigen::VectorXd center);

        Zonotope(Eigen::VectorXd center, Eigen::MatrixXd generators);

        /// Z(0, radius * I), the max-norm ball of the given radius.
        static Zonotope ball(Eigen::Index n, double radius);

        const Eigen::VectorXd& center() const { return c_; }
        const Eigen::MatrixXd& generators() const { return G_; }

        Eigen::Index dim() const { return c_.size(); }
        Eigen::Index num_generators() const { return G_.cols(); }

        bool operator==(const Zonotope& other) const;

    private:
        Eigen::VectorXd c_;
        Eigen::MatrixXd G_;
};

/// Tight axis-aligned box.
struct IntervalHull
{
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

Zonotope minkowski_sum(const Zonotope& z1, const Zonotope& z2);

Zonotope linear_map(const Eigen::MatrixXd& L, const Zonotope& z);

/// sup over x in z of ||x||_inf, i.e. max_i |c_i| + sum_j |G_ij|.
double norm_inf(const Zonotope& z);

/// Same as norm_inf(Z(c, G)) without building the zonotope.
double norm_inf(const Eigen::Ref<const Eigen::VectorXd>& c, const Eigen::Ref<const Eigen::MatrixXd>& G);

/**
 * @brief Zonotope enclosing conv(z1 u z2).
 *
 * For z1 = Z(b, F) and z2 = Z(c, G) with the same number p of generators the
 * result is Z((b + c)/2, ((F + G)/2, (b - c)/2, (F - G)/2)) with 2p + 1
 * generators. Its Hausdorff distance to conv(z1 u z2) w.r.t. the max norm is
 * at most the max row sum of |F - G|.
 *
 * Throws std::invalid_argument if dimensions or generator counts differ; the
 * caller is responsible for padding.
 */
Zonotope enclose(const Zonotope& z1, const Zonotope& z2);

/// max over x in z of dir^T x.
double support(const Zonotope& z, const Eigen::Ref<const Eigen::VectorXd>& dir);

IntervalHull interval_hull(const Zonotope& z);

/// Select coordinates (dim0, dim1), 0-based.
Zonotope project(const Zonotope& z, Eigen::Index dim0, Eigen::Index dim1);

/**
 * @brief Directions on the unit sphere of the 1-norm (the dual of the max norm).
 *
 * Always contains the 2n signed unit vectors first, followed by random_count
 * pseudorandom draws from a generator seeded with seed.
 */
std::vector<Eigen::VectorXd> l1_sphere_directions(Eigen::Index n, int random_count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Exact planar geometry.

using Point2 = Eigen::Vector2d;

/// Convex polygon given by its vertices in counterclockwise order. A segment
/// has two vertices and a point has one.
using Polygon = std::vector<Point2>;

/**
 * @brief Vertices of a 2D zonotope (zonogon) in counterclockwise order.
 *
 * Generators are normalized to angles in [0, pi), zero generators are dropped
 * and collinear generators are merged before the boundary walk. Rank-deficient
 * inputs give a segment or a point.
 */
Polygon to_polygon_2d(const Zonotope& z);

/// Convex hull in counterclockwise order, collinear points removed.
Polygon convex_hull(std::vector<Point2> points);

/// Support function of a polygon.
double support(const Polygon& poly, const Point2& dir);

/**
 * @brief Exact Hausdorff distance between two convex polygons w.r.t. the max norm.
 *
 * Evaluates |h_P - h_Q| on the 1-norm unit sphere at every breakpoint of the
 * piecewise-linear support functions, which is where the maximum is attained.
 */
double polygon_hausdorff(const Polygon& P, const Polygon& Q);

/// Whether P is a subset of Q up to tol, decided via support functions.
bool polygon_contains(const Polygon& Q, const Polygon& P, double tol);

} // namespace tubereach

#endif
