#include "tubereach/zonotope.hpp"

#include <cmath>

#include <random>
#include <stdexcept>
#include <string>

namespace tubereach
{

Zonotope::Zonotope(Eigen::VectorXd center) : Zonotope(std::move(center), Eigen::MatrixXd())
{
}

Zonotope::Zonotope(Eigen::VectorXd center, Eigen::MatrixXd generators)
    : c_(std::move(center)), G_(std::move(generators))
{
    if (G_.cols() == 0)
        G_.resize(c_.size(), 0);

    if (G_.rows() != c_.size())
    {
        throw std::invalid_argument("Zonotope: generator matrix has " + std::to_string(G_.rows()) +
                                    " rows but center has length " + std::to_string(c_.size()));
    }
    if (!c_.allFinite() || !G_.allFinite())
        throw std::invalid_argument("Zonotope: center and generators must be finite");
}

Zonotope Zonotope::ball(Eigen::Index n, double radius)
{
    if (!(radius >= 0.0))
        throw std::invalid_argument("Zonotope::ball: radius must be nonnegative");
    return {Eigen::VectorXd::Zero(n), radius * Eigen::MatrixXd::Identity(n, n)};
}

bool Zonotope::operator==(const Zonotope& other) const
{
    return c_.size() == other.c_.size() && G_.cols() == other.G_.cols() && c_ == other.c_ && G_ == other.G_;
}

Zonotope minkowski_sum(const Zonotope& z1, const Zonotope& z2)
{
    if (z1.dim() != z2.dim())
        throw std::invalid_argument("minkowski_sum: dimension mismatch");

    Eigen::MatrixXd G(z1.dim(), z1.num_generators() + z2.num_generators());
    G << z1.generators(), z2.generators();
    return {z1.center() + z2.center(), std::move(G)};
}

Zonotope linear_map(const Eigen::MatrixXd& L, const Zonotope& z)
{
    if (L.cols() != z.dim())
        throw std::invalid_argument("linear_map: matrix has " + std::to_string(L.cols()) +
                                    " columns, zonotope has dimension " + std::to_string(z.dim()));
    Eigen::MatrixXd G = L * z.generators();
    return {L * z.center(), std::move(G)};
}

double norm_inf(const Eigen::Ref<const Eigen::VectorXd>& c, const Eigen::Ref<const Eigen::MatrixXd>& G)
{
    if (c.size() == 0)
        return 0.0;
    Eigen::VectorXd rows = c.cwiseAbs();
    if (G.cols() > 0)
        rows += G.cwiseAbs().rowwise().sum();
    return rows.maxCoeff();
}

double norm_inf(const Zonotope& z)
{
    return norm_inf(z.center(), z.generators());
}

Zonotope enclose(const Zonotope& z1, const Zonotope& z2)
{
    if (z1.dim() != z2.dim())
        throw std::invalid_argument("enclose: dimension mismatch");
    if (z1.num_generators() != z2.num_generators())
        throw std::invalid_argument("enclose: generator counts differ (" + std::to_string(z1.num_generators()) +
                                    " vs " + std::to_string(z2.num_generators()) + ")");

    const Eigen::Index n = z1.dim();
    const Eigen::Index p = z1.num_generators();
    const auto& F = z1.generators();
    const auto& G = z2.generators();

    Eigen::MatrixXd J(n, 2 * p + 1);
    J.leftCols(p) = 0.5 * (F + G);
    J.col(p) = 0.5 * (z1.center() - z2.center());
    J.rightCols(p) = 0.5 * (F - G);
    return {0.5 * (z1.center() + z2.center()), std::move(J)};
}

double support(const Zonotope& z, const Eigen::Ref<const Eigen::VectorXd>& dir)
{
    if (dir.size() != z.dim())
        throw std::invalid_argument("support: direction has wrong dimension");
    // plain loops: a fixed summation order makes axis directions reproduce interval_hull bit for bit
    const Eigen::MatrixXd& G = z.generators();
    double value = 0.0;
    for (Eigen::Index i = 0; i < z.dim(); ++i)
        value += dir(i) * z.center()(i);
    double spread = 0.0;
    for (Eigen::Index j = 0; j < G.cols(); ++j)
    {
        double proj = 0.0;
        for (Eigen::Index i = 0; i < G.rows(); ++i)
            proj += dir(i) * G(i, j);
        spread += std::abs(proj);
    }
    return value + spread;
}

IntervalHull interval_hull(const Zonotope& z)
{
    const Eigen::MatrixXd& G = z.generators();
    Eigen::VectorXd radius = Eigen::VectorXd::Zero(z.dim());
    for (Eigen::Index j = 0; j < G.cols(); ++j)
        for (Eigen::Index i = 0; i < G.rows(); ++i)
            radius(i) += std::abs(G(i, j));
    return {z.center() - radius, z.center() + radius};
}

Zonotope project(const Zonotope& z, Eigen::Index dim0, Eigen::Index dim1)
{
    if (dim0 < 0 || dim1 < 0 || dim0 >= z.dim() || dim1 >= z.dim())
        throw std::out_of_range("project: index out of range for dimension " + std::to_string(z.dim()));

    Eigen::Vector2d c(z.center()(dim0), z.center()(dim1));
    Eigen::MatrixXd G(2, z.num_generators());
    G.row(0) = z.generators().row(dim0);
    G.row(1) = z.generators().row(dim1);
    return {c, std::move(G)};
}

std::vector<Eigen::VectorXd> l1_sphere_directions(Eigen::Index n, int random_count, std::uint64_t seed)
{
    std::vector<Eigen::VectorXd> dirs;
    dirs.reserve(2 * n + std::max(random_count, 0));
    for (Eigen::Index i = 0; i < n; ++i)
    {
        dirs.push_back(Eigen::VectorXd::Unit(n, i));
        dirs.push_back(-Eigen::VectorXd::Unit(n, i));
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < random_count; ++k)
    {
        Eigen::VectorXd d(n);
        do
        {
            for (Eigen::Index i = 0; i < n; ++i)
                d(i) = normal(rng);
        } while (d.lpNorm<1>() == 0.0);
        dirs.push_back(d / d.lpNorm<1>());
    }
    return dirs;
}

} // namespace tubereach
