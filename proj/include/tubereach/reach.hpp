#ifndef TUBEREACH_REACH_HPP_
#define TUBEREACH_REACH_HPP_

#include "tubereach/system.hpp"
#include "tubereach/zonotope.hpp"

#include <functional>
#include <optional>

namespace tubereach
{

/**
 * @brief Inflation radii for step size h (max norm).
 *
 *   r(h)     = exp(h M_A) - 1 - h M_A
 *   alpha(h) = r(h) ||U|| (M_B' + M_A M_B) / M_A^2
 *   beta(h)  = h^2 M_B' ||U||
 *   gamma(h) = r(h) (1 + M_A' / M_A^2)
 *   theta(h) = consistency bound of transition_approx
 */
struct InflationCoefficients
{
    double h = 0.0;
    double r = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double theta = 0.0;
};

InflationCoefficients inflation(const LtvSystem& sys, double h);

struct ReachOptions
{
    /// Multiply every inflation radius by (1 + 1e-12). Radii are evaluated in
    /// plain double precision without directed rounding.
    bool safety_margin = true;
};

inline constexpr double kSafetyMarginFactor = 1.0 + 1e-12;

/// Over-approximation Omega_i of the reachable set at t_i.
struct ReachStep
{
    int index = 0;
    double t = 0.0;
    Zonotope omega;
};

/// Step i of the tube: Omega_i and Lambda_i, which contains the reachable tube over [t_prev, t].
struct TubeStep
{
    int index = 0;
    double t_prev = 0.0;
    double t = 0.0;
    Zonotope omega;
    Zonotope lambda;
    double m_prev = 0.0;       ///< ||Omega_{i-1}||
    double reach_radius = 0.0; ///< alpha + theta m_prev
    double tube_radius = 0.0;  ///< alpha + beta + (gamma + theta) m_prev
};

/**
 * @brief Sequential generator of the zonotopic reach-set and tube recurrences
 * on the equidistant grid t_i = t0 + i h, h = (tf - t0) / N.
 *
 * Only (b_{i-1}, F_{i-1}) is retained between steps; every emitted step owns
 * copies of its zonotopes. Storage for F grows to n x (p + N (q + n)).
 *
 * Throws std::overflow_error if a nonfinite value appears.
 */
class ReachStepper
{
    public:

        ReachStepper(const LtvSystem& sys, int N, ReachOptions options = {});

        int num_steps() const { return N_; }
        int steps_done() const { return i_; }
        double step_size() const { return h_; }
        const InflationCoefficients& coefficients() const { return coeffs_; }

        /// Omega_0 = X0.
        ReachStep initial() const;

        /// Advance one step without forming the tube segment.
        std::optional<ReachStep> next_reach();

        /// Advance one step and form the tube segment.
        std::optional<TubeStep> next_tube();

        double grid_time(int i) const;

    private:
        struct Advance
        {
            Eigen::VectorXd b_prev;
            Eigen::MatrixXd mapped;  // Phi_i F_{i-1}
            Eigen::MatrixXd k;       // K_i
            double m_prev;
        };

        Advance advance();

        const LtvSystem& sys_;
        int N_;
        ReachOptions options_;
        double h_;
        InflationCoefficients coeffs_;
        int i_ = 0;
        Eigen::VectorXd b_;
        Eigen::MatrixXd F_;
        Eigen::Index cols_ = 0;
};

using ReachSink = std::function<void(const ReachStep&)>;
using TubeSink = std::function<void(const TubeStep&)>;

/// Emit (t_i, Omega_i) for i = 0..N.
void reach_sequence(const LtvSystem& sys, int N, const ReachSink& sink, ReachOptions options = {});

/// Emit TubeStep for i = 1..N.
void tube_sequence(const LtvSystem& sys, int N, const TubeSink& sink, ReachOptions options = {});

/// Materialize the whole tube (O(n^2 N^2) memory).
std::vector<TubeStep> compute_tube(const LtvSystem& sys, int N, ReachOptions options = {});

} // namespace tubereach

#endif
