#ifndef TUBEREACH_BENCHMARK_HPP_
#define TUBEREACH_BENCHMARK_HPP_

#include "tubereach/reach.hpp"
#include "tubereach/system.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace tubereach
{

/**
 * @brief Pedestrian footbridge beam m q_tt + EI q_yyyy + c q_t = f0 cos(omega t) q + w,
 * |w| <= wbar, simply supported at y = 0 and y = L, at rest at t0.
 *
 * Defaults are the reference parameter set.
 */
struct FootbridgeParams
{
    double length = 10.0;
    double mass = 2.0;
    double damping = 1.0;
    double stiffness = 1.0;  ///< EI
    double load = 1.0;       ///< f0
    double omega = 1.0;
    double wbar = 0.01;
    int nd = 4;              ///< spatial grid has nd + 1 nodes y_i = i L / nd
    double t0 = 0.0;
    double tf = 20.0;
};

/**
 * @brief Discrete fourth-derivative operator on the interior unknowns q_2 .. q_{nd-2}.
 *
 * Centered stencil [1, -4, 6, -4, 1]. The boundary nodes are eliminated by
 * q_0 = q_nd = 0 and the one-sided zero-curvature conditions
 * (q_0 - 2 q_1 + q_2) = 0, i.e. q_1 = q_2 / 2 (mirrored on the right), which
 * leaves nd - 3 unknowns. Not scaled by 1 / h_y^4.
 */
Eigen::MatrixXd fourth_difference_operator(int nd);

/**
 * @brief Reduced-order model x = (z, z') of the footbridge as a pencil model:
 * A(t) = [[0, I], [-K(t)/m, -(c/m) I]], K(t) = (EI / h_y^4) D4 - f0 cos(omega t) I,
 * B = [[0], [I]], U = [-wbar/m, wbar/m]^{nd-3}, X0 = {0}.
 */
PencilModel footbridge_model(const FootbridgeParams& p);

LtvSystem build_footbridge(const FootbridgeParams& p);

/// Running max over tube steps of |q_k| bounds from the interval hull of Lambda_i, k over the nd - 3 positions.
class DisplacementMonitor
{
    public:
        explicit DisplacementMonitor(int nd);

        void observe(const TubeStep& step);
        double bound() const { return bound_; }

    private:
        Eigen::Index positions_;
        double bound_ = 0.0;
};

double displacement_bound(std::span<const TubeStep> tube, int nd);

struct ConvergenceRow
{
    int N = 0;
    double error = 0.0;
    double order = 0.0;  ///< NaN where undefined
};

/**
 * @brief Terminal reach-set error for each N, with empirical orders
 * log(e_a / e_b) / log(N_b / N_a) between consecutive entries.
 *
 * The error is the sampled Hausdorff estimate between Omega_N and `reference`
 * when given, otherwise against the terminal set of the largest N
 * (self-convergence). Directions: 2n axes + 512 random, seeded with `seed`.
 */
std::vector<ConvergenceRow> convergence_study(const LtvSystem& sys, const std::vector<int>& Ns,
                                              const std::optional<Zonotope>& reference = std::nullopt,
                                              std::uint64_t seed = 1, int jobs = 1);

struct ScalingRow
{
    int nd = 0;
    Eigen::Index n = 0;
    long long generator_components = 0;  ///< sum_i n * (#generators of Lambda_i)
    double seconds = 0.0;
};

std::vector<ScalingRow> scaling_study(const std::vector<int>& nds, int N, const FootbridgeParams& base = {},
                                      int jobs = 1);

void write_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
void write_csv(std::ostream& out, const std::vector<ScalingRow>& rows);

struct DisplacementRow
{
    int N = 0;
    int nd = 0;
    double bound = 0.0;
};

void write_csv(std::ostream& out, const std::vector<DisplacementRow>& rows);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

} // namespace tubereach

#endif
