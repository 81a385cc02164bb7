#include "tubereach/zonotope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tubereach
{

namespace
{

double cross(const Point2& a, const Point2& b)
{
    return a.x() * b.y() - a.y() * b.x();
}

// Canonical representative of +-g with angle in [0, pi).
Point2 upper_half_plane(const Point2& g)
{
    if (g.y() < 0.0 || (g.y() == 0.0 && g.x() < 0.0))
        return -g;
    return g;
}

// Directions at which the support functions of both polygons are all linear
// in between: edge normals and tangents of either polygon plus the axes.
std::vector<Point2> critical_directions(const Polygon& P, const Polygon& Q)
{
    std::vector<Point2> dirs = {Point2(1, 0), Point2(-1, 0), Point2(0, 1), Point2(0, -1)};
    for (const Polygon* poly : {&P, &Q})
    {
        const std::size_t k = poly->size();
        if (k < 2)
            continue;
        for (std::size_t i = 0; i < k; ++i)
        {
            const Point2 e = (*poly)[(i + 1) % k] - (*poly)[i];
            if (e.lpNorm<1>() == 0.0)
                continue;
            const Point2 normal(e.y(), -e.x());
            dirs.push_back(normal);
            dirs.push_back(-normal);
            dirs.push_back(e);
            dirs.push_back(-e);
        }
    }
    for (auto& d : dirs)
        d /= d.lpNorm<1>();
    return dirs;
}

} // namespace

Polygon to_polygon_2d(const Zonotope& z)
{
    if (z.dim() != 2)
        throw std::invalid_argument("to_polygon_2d: zonotope must be two-dimensional");

    const Point2 c = z.center();

    std::vector<Point2> gens;
    gens.reserve(z.num_generators());
    for (Eigen::Index j = 0; j < z.num_generators(); ++j)
    {
        Point2 g = z.generators().col(j);
        if (g.x() == 0.0 && g.y() == 0.0)
            continue;
        gens.push_back(upper_half_plane(g));
    }

    std::sort(gens.begin(), gens.end(), [](const Point2& a, const Point2& b)
              { return std::atan2(a.y(), a.x()) < std::atan2(b.y(), b.x()); });

    // merge collinear (same direction after normalization)
    std::vector<Point2> merged;
    for (const auto& g : gens)
    {
        if (!merged.empty())
        {
            Point2& last = merged.back();
            const double scale = last.norm() * g.norm();
            if (std::abs(cross(last, g)) <= 1e-14 * scale && last.dot(g) > 0.0)
            {
                last += g;
                continue;
            }
        }
        merged.push_back(g);
    }

    Point2 v = c;
    for (const auto& g : merged)
        v -= g;

    Polygon poly;
    poly.reserve(2 * merged.size() + 1);
    poly.push_back(v);
    for (const auto& g : merged)
    {
        v += 2.0 * g;
        poly.push_back(v);
    }
    for (std::size_t j = 0; j + 1 < merged.size(); ++j)
    {
        v -= 2.0 * merged[j];
        poly.push_back(v);
    }
    return poly;
}

Polygon convex_hull(std::vector<Point2> points)
{
    std::sort(points.begin(), points.end(), [](const Point2& a, const Point2& b)
              { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 3)
        return points;

    Polygon hull(2 * points.size());
    std::size_t k = 0;
    for (const auto& p : points)
    {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0)
            --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = points.rbegin() + 1; it != points.rend(); ++it)
    {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], *it - hull[k - 2]) <= 0.0)
            --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

double support(const Polygon& poly, const Point2& dir)
{
    if (poly.empty())
        throw std::invalid_argument("support: empty polygon");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : poly)
        best = std::max(best, dir.dot(v));
    return best;
}

double polygon_hausdorff(const Polygon& P, const Polygon& Q)
{
    double dist = 0.0;
    for (const auto& d : critical_directions(P, Q))
        dist = std::max(dist, std::abs(support(P, d) - support(Q, d)));
    return dist;
}

bool polygon_contains(const Polygon& Q, const Polygon& P, double tol)
{
    for (const auto& d : critical_directions(P, Q))
    {
        if (support(P, d) > support(Q, d) + tol)
            return false;
    }
    return true;
}

} // namespace tubereach
