#include "tubereach/reach.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tubereach
{

namespace
{

void require_finite(double value, const char* what, int step)
{
    if (!std::isfinite(value))
    {
        throw std::overflow_error(std::string("nonfinite ") + what + " at step " + std::to_string(step) +
                                  " (exp(h M_A) overflow or divergent recurrence; try a larger N)");
    }
}

} // namespace

InflationCoefficients inflation(const LtvSystem& sys, double h)
{
    if (!(h > 0.0))
        throw std::invalid_argument("inflation: h must be positive");

    const BoundSet& bd = sys.bounds();
    const double ma = bd.a;
    const double norm_u = norm_inf(sys.input_set());

    InflationCoefficients c;
    c.h = h;
    c.r = exp_remainder(h * ma, 2);
    c.alpha = c.r * norm_u * (bd.b_dot + ma * bd.b) / (ma * ma);
    c.beta = h * h * bd.b_dot * norm_u;
    c.gamma = c.r * (1.0 + bd.a_dot / (ma * ma));
    c.theta = theta(sys, h);
    return c;
}

ReachStepper::ReachStepper(const LtvSystem& sys, int N, ReachOptions options)
    : sys_(sys), N_(N), options_(options)
{
    if (N < 1)
        throw std::invalid_argument("N must be ≥ 1");

    h_ = (sys.tf() - sys.t0()) / N;
    coeffs_ = inflation(sys, h_);
    for (double v : {coeffs_.r, coeffs_.alpha, coeffs_.beta, coeffs_.gamma, coeffs_.theta})
        require_finite(v, "inflation coefficient", 0);

    const Zonotope& x0 = sys.initial_set();
    const Eigen::Index n = x0.dim();
    const Eigen::Index p = x0.num_generators();
    const Eigen::Index q = sys.input_set().num_generators();

    b_ = x0.center();
    F_.resize(n, p + static_cast<Eigen::Index>(N) * (q + n));
    F_.leftCols(p) = x0.generators();
    cols_ = p;
}

double ReachStepper::grid_time(int i) const
{
    if (i == N_)
        return sys_.tf();
    return sys_.t0() + i * h_;
}

ReachStep ReachStepper::initial() const
{
    return {0, sys_.t0(), sys_.initial_set()};
}

ReachStepper::Advance ReachStepper::advance()
{
    const int i = i_ + 1;
    const double t_prev = grid_time(i - 1);
    const double t = grid_time(i);
    const Eigen::Index n = b_.size();
    const Eigen::Index q = sys_.input_set().num_generators();
    const double margin = options_.safety_margin ? kSafetyMarginFactor : 1.0;

    const Eigen::MatrixXd phi = transition_approx(sys_, t_prev, h_);
    const Eigen::MatrixXd Bt = sys_.b(t);

    Advance out;
    out.m_prev = norm_inf(b_, F_.leftCols(cols_));
    out.b_prev = b_;
    out.mapped = phi * F_.leftCols(cols_);
    out.k = h_ * Bt * sys_.input_set().generators();

    const double reach_radius = margin * (coeffs_.alpha + coeffs_.theta * out.m_prev);
    require_finite(reach_radius, "reach inflation radius", i);

    b_ = phi * b_ + h_ * Bt * sys_.input_set().center();
    if (!b_.allFinite() || !out.mapped.allFinite() || !out.k.allFinite())
        require_finite(std::nan(""), "reach set", i);

    F_.leftCols(cols_) = out.mapped;
    F_.middleCols(cols_, q) = out.k;
    F_.middleCols(cols_ + q, n) = reach_radius * Eigen::MatrixXd::Identity(n, n);
    cols_ += q + n;
    i_ = i;
    return out;
}

std::optional<ReachStep> ReachStepper::next_reach()
{
    if (i_ >= N_)
        return std::nullopt;
    advance();
    return ReachStep{i_, grid_time(i_), Zonotope(b_, F_.leftCols(cols_))};
}

std::optional<TubeStep> ReachStepper::next_tube()
{
    if (i_ >= N_)
        return std::nullopt;

    const Eigen::Index prev_cols = cols_;
    Eigen::MatrixXd f_prev = F_.leftCols(prev_cols);
    Advance a = advance();

    const Eigen::Index n = b_.size();
    const double margin = options_.safety_margin ? kSafetyMarginFactor : 1.0;

    // Both arguments carry p + (i - 1)(q + n) generators by construction.
    const Zonotope encl = enclose(Zonotope(a.b_prev, std::move(f_prev)), Zonotope(b_, std::move(a.mapped)));

    TubeStep step;
    step.index = i_;
    step.t_prev = grid_time(i_ - 1);
    step.t = grid_time(i_);
    step.m_prev = a.m_prev;
    step.reach_radius = margin * (coeffs_.alpha + coeffs_.theta * a.m_prev);
    step.tube_radius = margin * (coeffs_.alpha + coeffs_.beta + (coeffs_.gamma + coeffs_.theta) * a.m_prev);
    require_finite(step.tube_radius, "tube inflation radius", i_);

    const Eigen::Index j = encl.num_generators();
    const Eigen::Index q = a.k.cols();
    Eigen::MatrixXd H(n, j + q + n);
    H.leftCols(j) = encl.generators();
    H.middleCols(j, q) = a.k;
    H.rightCols(n) = step.tube_radius * Eigen::MatrixXd::Identity(n, n);

    step.omega = Zonotope(b_, F_.leftCols(cols_));
    step.lambda = Zonotope(encl.center(), std::move(H));
    return step;
}

void reach_sequence(const LtvSystem& sys, int N, const ReachSink& sink, ReachOptions options)
{
    ReachStepper stepper(sys, N, options);
    sink(stepper.initial());
    while (auto step = stepper.next_reach())
        sink(*step);
}

void tube_sequence(const LtvSystem& sys, int N, const TubeSink& sink, ReachOptions options)
{
    ReachStepper stepper(sys, N, options);
    while (auto step = stepper.next_tube())
        sink(*step);
}

std::vector<TubeStep> compute_tube(const LtvSystem& sys, int N, ReachOptions options)
{
    std::vector<TubeStep> steps;
    steps.reserve(N > 0 ? N : 0);
    tube_sequence(sys, N, [&steps](const TubeStep& s) { steps.push_back(s); }, options);
    return steps;
}

} // namespace tubereach
