#include "tubereach/oracle.hpp"

#include "tubereach/reach.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tubereach::oracle
{

Eigen::MatrixXd reference_transition(const LtvSystem& sys, double s, double t, int substeps)
{
    if (t < s)
        throw std::invalid_argument("reference_transition: requires s <= t");
    if (substeps < 1)
        throw std::invalid_argument("reference_transition: substeps must be >= 1");

    const Eigen::Index n = sys.state_dim();
    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n, n);
    if (t == s)
        return phi;

    const double dt = (t - s) / substeps;
    for (int k = 0; k < substeps; ++k)
    {
        const double tk = s + k * dt;
        const Eigen::MatrixXd a0 = sys.a(tk);
        const Eigen::MatrixXd am = sys.a(tk + 0.5 * dt);
        const Eigen::MatrixXd a1 = sys.a(tk + dt);

        const Eigen::MatrixXd k1 = a0 * phi;
        const Eigen::MatrixXd k2 = am * (phi + 0.5 * dt * k1);
        const Eigen::MatrixXd k3 = am * (phi + 0.5 * dt * k2);
        const Eigen::MatrixXd k4 = a1 * (phi + dt * k3);
        phi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return phi;
}

Trajectory simulate(const LtvSystem& sys, const Eigen::VectorXd& x0, const InputSignal& u, int substeps)
{
    if (u.grid.size() < 2 || u.values.size() + 1 != u.grid.size())
        throw std::invalid_argument("simulate: input grid and values do not match");
    if (substeps < 1)
        throw std::invalid_argument("simulate: substeps must be >= 1");
    if (x0.size() != sys.state_dim())
        throw std::invalid_argument("simulate: initial state has wrong dimension");

    Trajectory traj;
    traj.times.reserve((u.grid.size() - 1) * substeps + 1);
    traj.states.reserve((u.grid.size() - 1) * substeps + 1);

    Eigen::VectorXd x = x0;
    traj.times.push_back(u.grid.front());
    traj.states.push_back(x);

    for (std::size_t k = 0; k + 1 < u.grid.size(); ++k)
    {
        const Eigen::VectorXd& uk = u.values[k];
        const double dt = (u.grid[k + 1] - u.grid[k]) / substeps;
        auto rhs = [&](double t, const Eigen::VectorXd& y) -> Eigen::VectorXd
        { return sys.a(t) * y + sys.b(t) * uk; };

        for (int j = 0; j < substeps; ++j)
        {
            const double t = u.grid[k] + j * dt;
            const Eigen::VectorXd k1 = rhs(t, x);
            const Eigen::VectorXd k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1);
            const Eigen::VectorXd k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2);
            const Eigen::VectorXd k4 = rhs(t + dt, x + dt * k3);
            x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            traj.times.push_back(j + 1 == substeps ? u.grid[k + 1] : t + dt);
            traj.states.push_back(x);
        }
    }
    return traj;
}

double set_integral_quadrature(const LtvSystem& sys, double a, double b, const Eigen::VectorXd& dir,
                               int subintervals)
{
    if (b < a)
        throw std::invalid_argument("set_integral_quadrature: requires a <= b");
    if (subintervals < 1)
        throw std::invalid_argument("set_integral_quadrature: subintervals must be >= 1");
    if (dir.size() != sys.state_dim())
        throw std::invalid_argument("set_integral_quadrature: direction has wrong dimension");
    if (b == a)
        return 0.0;

    const Zonotope& U = sys.input_set();
    const double ds = (b - a) / subintervals;
    const double half = 0.5 * ds;

    // lambda' = -A(s)^T lambda backwards from lambda(b) = dir, in half steps
    // so that the midpoints are available.
    auto rhs = [&](double s, const Eigen::VectorXd& y) -> Eigen::VectorXd
    { return -sys.a(s).transpose() * y; };
    auto back_step = [&](double s, const Eigen::VectorXd& y) -> Eigen::VectorXd
    {
        const double dt = -half;
        const Eigen::VectorXd k1 = rhs(s, y);
        const Eigen::VectorXd k2 = rhs(s + 0.5 * dt, y + 0.5 * dt * k1);
        const Eigen::VectorXd k3 = rhs(s + 0.5 * dt, y + 0.5 * dt * k2);
        const Eigen::VectorXd k4 = rhs(s + dt, y + dt * k3);
        return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    double total = 0.0;
    Eigen::VectorXd lambda = dir;
    for (int k = subintervals; k > 0; --k)
    {
        const double right = a + k * ds;
        const double mid = right - half;
        lambda = back_step(right, lambda);
        total += support(U, sys.b(mid).transpose() * lambda) * ds;
        lambda = back_step(mid, lambda);
    }
    return total;
}

double hausdorff_sampled(const Zonotope& z1, const Zonotope& z2, std::span<const Eigen::VectorXd> dirs)
{
    if (z1.dim() != z2.dim())
        throw std::invalid_argument("hausdorff_sampled: dimension mismatch");
    double dist = 0.0;
    for (const auto& d : dirs)
        dist = std::max(dist, std::abs(support(z1, d) - support(z2, d)));
    return dist;
}

Eigen::VectorXd random_vertex(const Zonotope& z, std::mt19937_64& rng)
{
    std::bernoulli_distribution coin(0.5);
    Eigen::VectorXd v = z.center();
    for (Eigen::Index j = 0; j < z.num_generators(); ++j)
        v += (coin(rng) ? 1.0 : -1.0) * z.generators().col(j);
    return v;
}

InputSignal random_vertex_input(const LtvSystem& sys, int intervals, std::mt19937_64& rng)
{
    InputSignal u;
    const double dt = (sys.tf() - sys.t0()) / intervals;
    for (int k = 0; k <= intervals; ++k)
        u.grid.push_back(k == intervals ? sys.tf() : sys.t0() + k * dt);
    for (int k = 0; k < intervals; ++k)
        u.values.push_back(random_vertex(sys.input_set(), rng));
    return u;
}

std::uint64_t seed_from_env(std::uint64_t fallback)
{
    const char* env = std::getenv("TUBEREACH_SEED");
    if (env == nullptr || *env == '\0')
        return fallback;
    try
    {
        return std::stoull(env);
    }
    catch (const std::exception&)
    {
        throw std::invalid_argument(std::string("TUBEREACH_SEED is not an unsigned integer: ") + env);
    }
}

ContainmentReport check_containment(const LtvSystem& sys, int N, std::span<const Eigen::VectorXd> dirs,
                                    const ContainmentOptions& options)
{
    const std::size_t nd = dirs.size();
    const int per_step = options.switches_per_step;
    if (per_step < 1)
        throw std::invalid_argument("check_containment: switches_per_step must be >= 1");

    // support tables: omega_support[i][d] for i = 0..N, lambda_support[i][d] for i = 1..N
    std::vector<std::vector<double>> omega_support(N + 1, std::vector<double>(nd));
    std::vector<std::vector<double>> lambda_support(N + 1, std::vector<double>(nd));
    for (std::size_t d = 0; d < nd; ++d)
        omega_support[0][d] = support(sys.initial_set(), dirs[d]);
    tube_sequence(sys, N,
                  [&](const TubeStep& step)
                  {
                      for (std::size_t d = 0; d < nd; ++d)
                      {
                          omega_support[step.index][d] = support(step.omega, dirs[d]);
                          lambda_support[step.index][d] = support(step.lambda, dirs[d]);
                      }
                  });

    ContainmentReport report;
    std::mt19937_64 rng(options.seed);
    auto test = [&](const Eigen::VectorXd& x, const std::vector<double>& table)
    {
        for (std::size_t d = 0; d < nd; ++d)
        {
            const double excess = dirs[d].dot(x) - table[d];
            report.worst_excess = std::max(report.worst_excess, excess);
            ++report.checks;
            if (excess > options.tol)
                ++report.violations;
        }
    };

    for (int r = 0; r < options.trajectories; ++r)
    {
        const Eigen::VectorXd x0 = random_vertex(sys.initial_set(), rng);
        const InputSignal u = random_vertex_input(sys, N * per_step, rng);
        const Trajectory traj = simulate(sys, x0, u, options.substeps);

        // node index of switch time k is k * substeps
        for (int i = 0; i <= N; ++i)
            test(traj.states[static_cast<std::size_t>(i) * per_step * options.substeps], omega_support[i]);
        for (int i = 1; i <= N; ++i)
        {
            for (int j = 0; j <= per_step; ++j)
            {
                const std::size_t node = (static_cast<std::size_t>(i - 1) * per_step + j) * options.substeps;
                test(traj.states[node], lambda_support[i]);
            }
        }
    }
    return report;
}

} // namespace tubereach::oracle
