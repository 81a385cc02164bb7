#ifndef TUBEREACH_ORACLE_HPP_
#define TUBEREACH_ORACLE_HPP_

// Reference computations for testing. The integrators here are independent
// of transition_approx (RK4 with their own step control).

#include "tubereach/system.hpp"
#include "tubereach/zonotope.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace tubereach::oracle
{

/// Piecewise-constant input: values[k] is applied on [grid[k], grid[k + 1]).
struct InputSignal
{
    std::vector<double> grid;
    std::vector<Eigen::VectorXd> values;
};

struct Trajectory
{
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
};

/// phi(t, s) by classical RK4 on Phi' = A(t) Phi with `substeps` equal steps.
Eigen::MatrixXd reference_transition(const LtvSystem& sys, double s, double t, int substeps);

/**
 * @brief RK4 solution of x' = A(t) x + B(t) u(t), x(grid[0]) = x0.
 *
 * Every input interval is split into `substeps` equal RK4 steps; the returned
 * trajectory holds the state at every step node (grid points included).
 */
Trajectory simulate(const LtvSystem& sys, const Eigen::VectorXd& x0, const InputSignal& u, int substeps);

/**
 * @brief Support of the set integral int_a^b phi(b, s) B(s) U ds in direction dir.
 *
 * Midpoint quadrature of support(U, B(s)^T phi(b, s)^T dir) with the adjoint
 * lambda(s) = phi(b, s)^T dir integrated backwards by RK4.
 */
double set_integral_quadrature(const LtvSystem& sys, double a, double b, const Eigen::VectorXd& dir,
                               int subintervals);

/// max over dirs of |support(z1, l) - support(z2, l)|, a lower bound of the max-norm Hausdorff distance.
double hausdorff_sampled(const Zonotope& z1, const Zonotope& z2, std::span<const Eigen::VectorXd> dirs);

/// Uniformly random sign vertex c + G s, s in {-1, 1}^q.
Eigen::VectorXd random_vertex(const Zonotope& z, std::mt19937_64& rng);

/// Input switching between random vertices of U on an equidistant grid.
InputSignal random_vertex_input(const LtvSystem& sys, int intervals, std::mt19937_64& rng);

/// Seed from the TUBEREACH_SEED environment variable, or `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

/**
 * @brief Sampled soundness check of a tube against simulated trajectories.
 *
 * Simulates `trajectories` runs from random vertices of X0 with inputs
 * switching between random vertices of U at `switches_per_step` equally spaced
 * times per step, and tests support containment at every grid time (in Omega)
 * and intra-step node (in Lambda) along `dirs`.
 */
struct ContainmentReport
{
    long checks = 0;
    long violations = 0;
    double worst_excess = -std::numeric_limits<double>::infinity();
};

struct ContainmentOptions
{
    int trajectories = 200;
    int switches_per_step = 8;
    int substeps = 8;
    double tol = 1e-9;
    std::uint64_t seed = 1;
};

ContainmentReport check_containment(const LtvSystem& sys, int N, std::span<const Eigen::VectorXd> dirs,
                                    const ContainmentOptions& options);

} // namespace tubereach::oracle

#endif
