#ifndef TUBEREACH_SYSTEM_HPP_
#define TUBEREACH_SYSTEM_HPP_

#include "tubereach/zonotope.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace tubereach
{

using MatrixFunction = std::function<Eigen::MatrixXd(double)>;

/**
 * @brief Operator-norm bounds (max norm) of the coefficients over [t0, tf].
 *
 * a_dot_dot bounds the second derivative of A and only enters the
 * consistency bound of the second-order Taylor transition approximation.
 */
struct BoundSet
{
    double a = 0.0;
    double a_dot = 0.0;
    double a_dot_dot = 0.0;
    double b = 0.0;
    double b_dot = 0.0;
};

/// Partial override of a BoundSet; unset fields keep the derived value.
struct BoundOverride
{
    std::optional<double> a;
    std::optional<double> a_dot;
    std::optional<double> a_dot_dot;
    std::optional<double> b;
    std::optional<double> b_dot;

    BoundSet apply(BoundSet base) const;
};

struct HarmonicTerm
{
    double omega = 0.0;
    Eigen::MatrixXd cos_coeff;
    Eigen::MatrixXd sin_coeff;
};

/**
 * @brief Matrix family M(t) = M0 + sum_k (C_k cos(omega_k t) + S_k sin(omega_k t)).
 */
class HarmonicPencil
{
    public:

        HarmonicPencil() = default;
        explicit HarmonicPencil(Eigen::MatrixXd constant, std::vector<HarmonicTerm> terms = {});

        /// Constant pencil.
        static HarmonicPencil constant(Eigen::MatrixXd m) { return HarmonicPencil(std::move(m)); }

        Eigen::Index rows() const { return m0_.rows(); }
        Eigen::Index cols() const { return m0_.cols(); }
        const Eigen::MatrixXd& constant_term() const { return m0_; }
        const std::vector<HarmonicTerm>& terms() const { return terms_; }

        Eigen::MatrixXd value(double t) const;
        Eigen::MatrixXd derivative(double t) const;
        Eigen::MatrixXd second_derivative(double t) const;

    private:
        Eigen::MatrixXd m0_;
        std::vector<HarmonicTerm> terms_;
};

/// Conservative bounds on sup ||M||, sup ||M'|| and sup ||M''|| (elementwise triangle inequality).
struct PencilBounds
{
    double value = 0.0;
    double derivative = 0.0;
    double second_derivative = 0.0;
};

PencilBounds derive_bounds(const HarmonicPencil& p);

/// Induced max norm: maximum absolute row sum.
double matrix_norm_inf(const Eigen::Ref<const Eigen::MatrixXd>& M);

/**
 * @brief Linear time-varying system x' = A(t) x + B(t) u on [t0, tf] with
 * x(t0) in X0 and u(t) in U.
 *
 * Construction checks shapes, t0 < tf, M_A > 0, and samples the evaluators at
 * 64 times to reject bounds that are violated. Evaluators must be pure.
 */
class LtvSystem
{
    public:

        struct Evaluators
        {
            MatrixFunction a;
            MatrixFunction a_dot;
            MatrixFunction b;
            // optional, used only for bound validation
            MatrixFunction a_dot_dot;
            MatrixFunction b_dot;
        };

        LtvSystem(double t0, double tf, Evaluators evaluators, BoundSet bounds, Zonotope x0, Zonotope u);

        Eigen::Index state_dim() const { return x0_.dim(); }
        Eigen::Index input_dim() const { return u_.dim(); }
        double t0() const { return t0_; }
        double tf() const { return tf_; }

        Eigen::MatrixXd a(double t) const { return eval_.a(t); }
        Eigen::MatrixXd a_dot(double t) const { return eval_.a_dot(t); }
        Eigen::MatrixXd b(double t) const { return eval_.b(t); }

        const Evaluators& evaluators() const { return eval_; }
        const BoundSet& bounds() const { return bounds_; }
        const Zonotope& initial_set() const { return x0_; }
        const Zonotope& input_set() const { return u_; }

    private:
        double t0_;
        double tf_;
        Evaluators eval_;
        BoundSet bounds_;
        Zonotope x0_;
        Zonotope u_;
};

/**
 * @brief Throws std::invalid_argument if a bound is exceeded (by more than
 * 1e-9) at one of `samples` equally spaced times in [t0, tf], or an evaluator
 * returns a matrix of the wrong shape or with nonfinite entries.
 */
void validate_bounds(const LtvSystem& sys, int samples);

/// Input matrix given either as a constant or as a pencil.
using InputMatrix = std::variant<Eigen::MatrixXd, HarmonicPencil>;

/**
 * @brief Build a system from pencils. Bounds come from derive_bounds and can
 * be selectively replaced by `overrides`.
 */
LtvSystem pencil_to_system(const HarmonicPencil& a, const InputMatrix& b, double t0, double tf, Zonotope x0,
                           Zonotope u, const BoundOverride& overrides = {});

/// Declarative pencil-based system description (the JSON system format).
struct PencilModel
{
    double t0 = 0.0;
    double tf = 1.0;
    HarmonicPencil a;
    InputMatrix b;
    Zonotope x0;
    Zonotope u;
    BoundOverride bounds;

    LtvSystem build() const { return pencil_to_system(a, b, t0, tf, x0, u, bounds); }
};

/// I + h A(s) + h^2 (A'(s) + A(s)^2) / 2, the second-order Taylor approximation of phi(s + h, s).
Eigen::MatrixXd transition_approx(const LtvSystem& sys, double s, double h);

/**
 * @brief Local error bound of transition_approx:
 * (1 + 3 M_A'/M_A^2 + M_A''/M_A^3) (exp(h M_A) - 1 - h M_A - (h M_A)^2 / 2).
 */
double theta(const LtvSystem& sys, double h);

/// exp(x) - sum_{j < order} x^j / j!, accurate for small x.
double exp_remainder(double x, int order);

} // namespace tubereach

#endif
