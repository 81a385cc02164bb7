#include "tubereach/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tubereach
{

namespace
{

void check_shape(const Eigen::MatrixXd& M, Eigen::Index rows, Eigen::Index cols, const char* what)
{
    if (M.rows() != rows || M.cols() != cols)
    {
        throw std::invalid_argument(std::string(what) + " has shape " + std::to_string(M.rows()) + "x" +
                                    std::to_string(M.cols()) + ", expected " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
    if (!M.allFinite())
        throw std::invalid_argument(std::string(what) + " has nonfinite entries");
}

void check_bound(double value, double bound, const char* name, double t)
{
    if (value > bound + 1e-9)
    {
        throw std::invalid_argument(std::string(name) + " bound violated at t = " + std::to_string(t) +
                                    ": norm " + std::to_string(value) + " exceeds " + std::to_string(bound));
    }
}

} // namespace

BoundSet BoundOverride::apply(BoundSet base) const
{
    if (a) base.a = *a;
    if (a_dot) base.a_dot = *a_dot;
    if (a_dot_dot) base.a_dot_dot = *a_dot_dot;
    if (b) base.b = *b;
    if (b_dot) base.b_dot = *b_dot;
    return base;
}

HarmonicPencil::HarmonicPencil(Eigen::MatrixXd constant, std::vector<HarmonicTerm> terms)
    : m0_(std::move(constant)), terms_(std::move(terms))
{
    check_shape(m0_, m0_.rows(), m0_.cols(), "pencil constant term");
    for (auto& term : terms_)
    {
        if (term.cos_coeff.size() == 0)
            term.cos_coeff = Eigen::MatrixXd::Zero(m0_.rows(), m0_.cols());
        if (term.sin_coeff.size() == 0)
            term.sin_coeff = Eigen::MatrixXd::Zero(m0_.rows(), m0_.cols());
        check_shape(term.cos_coeff, m0_.rows(), m0_.cols(), "pencil cos coefficient");
        check_shape(term.sin_coeff, m0_.rows(), m0_.cols(), "pencil sin coefficient");
        if (!std::isfinite(term.omega))
            throw std::invalid_argument("pencil frequency must be finite");
    }
}

Eigen::MatrixXd HarmonicPencil::value(double t) const
{
    Eigen::MatrixXd M = m0_;
    for (const auto& term : terms_)
        M += std::cos(term.omega * t) * term.cos_coeff + std::sin(term.omega * t) * term.sin_coeff;
    return M;
}

Eigen::MatrixXd HarmonicPencil::derivative(double t) const
{
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m0_.rows(), m0_.cols());
    for (const auto& term : terms_)
    {
        const double w = term.omega;
        M += -w * std::sin(w * t) * term.cos_coeff + w * std::cos(w * t) * term.sin_coeff;
    }
    return M;
}

Eigen::MatrixXd HarmonicPencil::second_derivative(double t) const
{
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m0_.rows(), m0_.cols());
    for (const auto& term : terms_)
    {
        const double w = term.omega;
        M -= w * w * (std::cos(w * t) * term.cos_coeff + std::sin(w * t) * term.sin_coeff);
    }
    return M;
}

double matrix_norm_inf(const Eigen::Ref<const Eigen::MatrixXd>& M)
{
    if (M.rows() == 0 || M.cols() == 0)
        return 0.0;
    return M.cwiseAbs().rowwise().sum().maxCoeff();
}

PencilBounds derive_bounds(const HarmonicPencil& p)
{
    Eigen::MatrixXd value = p.constant_term().cwiseAbs();
    Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(p.rows(), p.cols());
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(p.rows(), p.cols());
    for (const auto& term : p.terms())
    {
        const Eigen::MatrixXd amplitude = term.cos_coeff.cwiseAbs() + term.sin_coeff.cwiseAbs();
        const double w = std::abs(term.omega);
        value += amplitude;
        d1 += w * amplitude;
        d2 += w * w * amplitude;
    }
    return {matrix_norm_inf(value), matrix_norm_inf(d1), matrix_norm_inf(d2)};
}

LtvSystem::LtvSystem(double t0, double tf, Evaluators evaluators, BoundSet bounds, Zonotope x0, Zonotope u)
    : t0_(t0), tf_(tf), eval_(std::move(evaluators)), bounds_(bounds), x0_(std::move(x0)), u_(std::move(u))
{
    if (!std::isfinite(t0_) || !std::isfinite(tf_) || !(t0_ < tf_))
        throw std::invalid_argument("t0 < tf required");
    if (!eval_.a || !eval_.b)
        throw std::invalid_argument("A(t) and B(t) evaluators are required");
    if (!eval_.a_dot)
        throw std::invalid_argument("A(t) must come with an evaluator for its derivative");
    if (x0_.dim() == 0)
        throw std::invalid_argument("state dimension must be positive");
    if (!(bounds_.a > 0.0) || !std::isfinite(bounds_.a))
        throw std::invalid_argument("M_A must be positive");
    for (double v : {bounds_.a_dot, bounds_.a_dot_dot, bounds_.b, bounds_.b_dot})
    {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("norm bounds must be finite and nonnegative");
    }
    validate_bounds(*this, 64);
}

void validate_bounds(const LtvSystem& sys, int samples)
{
    const Eigen::Index n = sys.state_dim();
    const Eigen::Index m = sys.input_dim();
    const auto& ev = sys.evaluators();
    const auto& bd = sys.bounds();
    samples = std::max(samples, 2);

    for (int k = 0; k < samples; ++k)
    {
        const double t = sys.t0() + (sys.tf() - sys.t0()) * k / (samples - 1);

        const Eigen::MatrixXd A = ev.a(t);
        check_shape(A, n, n, "A(t)");
        check_bound(matrix_norm_inf(A), bd.a, "M_A", t);

        const Eigen::MatrixXd Ad = ev.a_dot(t);
        check_shape(Ad, n, n, "A'(t)");
        check_bound(matrix_norm_inf(Ad), bd.a_dot, "M_Adot", t);

        const Eigen::MatrixXd B = ev.b(t);
        check_shape(B, n, m, "B(t)");
        check_bound(matrix_norm_inf(B), bd.b, "M_B", t);

        if (ev.a_dot_dot)
        {
            const Eigen::MatrixXd Add = ev.a_dot_dot(t);
            check_shape(Add, n, n, "A''(t)");
            check_bound(matrix_norm_inf(Add), bd.a_dot_dot, "M_Addot", t);
        }
        if (ev.b_dot)
        {
            const Eigen::MatrixXd Bd = ev.b_dot(t);
            check_shape(Bd, n, m, "B'(t)");
            check_bound(matrix_norm_inf(Bd), bd.b_dot, "M_Bdot", t);
        }
    }
}

LtvSystem pencil_to_system(const HarmonicPencil& a, const InputMatrix& b, double t0, double tf, Zonotope x0,
                           Zonotope u, const BoundOverride& overrides)
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("A pencil must be square");
    if (a.rows() != x0.dim())
        throw std::invalid_argument("A pencil and X0 dimensions differ");

    const PencilBounds ab = derive_bounds(a);
    BoundSet bounds;
    bounds.a = ab.value;
    bounds.a_dot = ab.derivative;
    bounds.a_dot_dot = ab.second_derivative;

    LtvSystem::Evaluators ev;
    ev.a = [a](double t) { return a.value(t); };
    ev.a_dot = [a](double t) { return a.derivative(t); };
    ev.a_dot_dot = [a](double t) { return a.second_derivative(t); };

    if (const auto* constant = std::get_if<Eigen::MatrixXd>(&b))
    {
        if (constant->rows() != a.rows() || constant->cols() != u.dim())
            throw std::invalid_argument("B has the wrong shape");
        bounds.b = matrix_norm_inf(*constant);
        bounds.b_dot = 0.0;
        const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(constant->rows(), constant->cols());
        ev.b = [B = *constant](double) { return B; };
        ev.b_dot = [zero](double) { return zero; };
    }
    else
    {
        const auto& bp = std::get<HarmonicPencil>(b);
        if (bp.rows() != a.rows() || bp.cols() != u.dim())
            throw std::invalid_argument("B pencil has the wrong shape");
        const PencilBounds bb = derive_bounds(bp);
        bounds.b = bb.value;
        bounds.b_dot = bb.derivative;
        ev.b = [bp](double t) { return bp.value(t); };
        ev.b_dot = [bp](double t) { return bp.derivative(t); };
    }

    return {t0, tf, std::move(ev), overrides.apply(bounds), std::move(x0), std::move(u)};
}

Eigen::MatrixXd transition_approx(const LtvSystem& sys, double s, double h)
{
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max({1.0, std::abs(sys.t0()), std::abs(sys.tf())});
    if (!(h >= 0.0) || s < sys.t0() - slack || s + h > sys.tf() + slack)
    {
        throw std::out_of_range("transition_approx: [" + std::to_string(s) + ", " + std::to_string(s + h) +
                                "] is not inside the time interval");
    }

    const Eigen::MatrixXd A = sys.a(s);
    const Eigen::Index n = A.rows();
    return Eigen::MatrixXd::Identity(n, n) + h * A + (0.5 * h * h) * (sys.a_dot(s) + A * A);
}

double exp_remainder(double x, int order)
{
    if (order < 0)
        throw std::invalid_argument("exp_remainder: negative order");

    if (x >= 0.0 && x <= 8.0)
    {
        // all terms positive, no cancellation
        double term = 1.0;
        for (int j = 1; j <= order; ++j)
            term *= x / j;
        double sum = 0.0;
        for (int j = order + 1; term > 0.0; ++j)
        {
            const double next = sum + term;
            if (next == sum)
                break;
            sum = next;
            term *= x / j;
        }
        return sum;
    }

    double partial = 0.0;
    double term = 1.0;
    for (int j = 0; j < order; ++j)
    {
        partial += term;
        term *= x / (j + 1);
    }
    return std::exp(x) - partial;
}

double theta(const LtvSystem& sys, double h)
{
    if (!(h >= 0.0))
        throw std::invalid_argument("theta: h must be nonnegative");
    const auto& bd = sys.bounds();
    const double ma = bd.a;
    const double factor = 1.0 + 3.0 * bd.a_dot / (ma * ma) + bd.a_dot_dot / (ma * ma * ma);
    return factor * exp_remainder(h * ma, 3);
}

} // namespace tubereach
