#include "tubereach/benchmark.hpp"

#include "tubereach/io.hpp"
#include "tubereach/oracle.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace tubereach
{

namespace
{

// Runs task(k) for k in [0, count) on up to `jobs` threads.
template <typename Task>
void run_cells(int count, int jobs, Task&& task)
{
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1)
    {
        for (int k = 0; k < count; ++k)
            task(k);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
    {
        workers.emplace_back(
            [&]
            {
                for (int k = next++; k < count && !failed; k = next++)
                {
                    try
                    {
                        task(k);
                    }
                    catch (...)
                    {
                        if (!failed.exchange(true))
                            error = std::current_exception();
                    }
                }
            });
    }
    for (auto& w : workers)
        w.join();
    if (error)
        std::rethrow_exception(error);
}

Zonotope terminal_reach_set(const LtvSystem& sys, int N)
{
    ReachStepper stepper(sys, N);
    std::optional<ReachStep> last;
    while (auto step = stepper.next_reach())
        last = std::move(step);
    return last->omega;
}

void write_number(std::ostream& out, double v)
{
    if (std::isnan(v))
        out << "nan";
    else
        out << io::format_double(v);
}

} // namespace

Eigen::MatrixXd fourth_difference_operator(int nd)
{
    if (nd < 4)
        throw std::invalid_argument("Nd must be >= 4");

    const int unknowns = nd - 3;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(unknowns, unknowns);
    const double stencil[5] = {1.0, -4.0, 6.0, -4.0, 1.0};

    // node j (2 <= j <= nd - 2) is column j - 2
    for (int j = 2; j <= nd - 2; ++j)
    {
        for (int k = -2; k <= 2; ++k)
        {
            const int node = j + k;
            const double w = stencil[k + 2];
            if (node == 0 || node == nd)
                continue;
            if (node == 1)
                D(j - 2, 0) += 0.5 * w;
            else if (node == nd - 1)
                D(j - 2, unknowns - 1) += 0.5 * w;
            else
                D(j - 2, node - 2) += w;
        }
    }
    return D;
}

PencilModel footbridge_model(const FootbridgeParams& p)
{
    if (p.nd < 4)
        throw std::invalid_argument("Nd must be >= 4");
    if (!(p.length > 0.0) || !(p.mass > 0.0))
        throw std::invalid_argument("footbridge length and mass must be positive");
    if (!(p.wbar >= 0.0))
        throw std::invalid_argument("footbridge disturbance bound must be nonnegative");

    const int k = p.nd - 3;
    const int n = 2 * k;
    const double hy = p.length / p.nd;
    const double hy4 = hy * hy * hy * hy;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(k, k);

    Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(n, n);
    a0.topRightCorner(k, k) = I;
    a0.bottomLeftCorner(k, k) = -(p.stiffness / (p.mass * hy4)) * fourth_difference_operator(p.nd);
    a0.bottomRightCorner(k, k) = -(p.damping / p.mass) * I;

    HarmonicTerm term;
    term.omega = p.omega;
    term.cos_coeff = Eigen::MatrixXd::Zero(n, n);
    term.cos_coeff.bottomLeftCorner(k, k) = (p.load / p.mass) * I;
    term.sin_coeff = Eigen::MatrixXd::Zero(n, n);

    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, k);
    b.bottomRows(k) = I;

    PencilModel model;
    model.t0 = p.t0;
    model.tf = p.tf;
    model.a = HarmonicPencil(std::move(a0), {term});
    model.b = std::move(b);
    model.x0 = Zonotope(Eigen::VectorXd::Zero(n));
    model.u = Zonotope(Eigen::VectorXd::Zero(k), (p.wbar / p.mass) * I);
    return model;
}

LtvSystem build_footbridge(const FootbridgeParams& p)
{
    return footbridge_model(p).build();
}

DisplacementMonitor::DisplacementMonitor(int nd) : positions_(nd - 3)
{
    if (nd < 4)
        throw std::invalid_argument("Nd must be >= 4");
}

void DisplacementMonitor::observe(const TubeStep& step)
{
    if (step.lambda.dim() != 2 * positions_)
        throw std::invalid_argument("displacement_bound: tube dimension does not match Nd");
    const IntervalHull box = interval_hull(step.lambda);
    for (Eigen::Index k = 0; k < positions_; ++k)
        bound_ = std::max({bound_, std::abs(box.lower(k)), std::abs(box.upper(k))});
}

double displacement_bound(std::span<const TubeStep> tube, int nd)
{
    DisplacementMonitor monitor(nd);
    for (const auto& step : tube)
        monitor.observe(step);
    return monitor.bound();
}

std::vector<ConvergenceRow> convergence_study(const LtvSystem& sys, const std::vector<int>& Ns,
                                              const std::optional<Zonotope>& reference, std::uint64_t seed,
                                              int jobs)
{
    if (Ns.size() < 2)
        throw std::invalid_argument("convergence_study: at least two values of N are required");
    for (std::size_t k = 0; k < Ns.size(); ++k)
    {
        if (Ns[k] < 1 || (k > 0 && Ns[k] <= Ns[k - 1]))
            throw std::invalid_argument("convergence_study: N values must be >= 1 and strictly increasing");
    }
    if (reference && reference->dim() != sys.state_dim())
        throw std::invalid_argument("convergence_study: reference has wrong dimension");

    std::vector<Zonotope> terminal(Ns.size());
    run_cells(static_cast<int>(Ns.size()), jobs, [&](int k) { terminal[k] = terminal_reach_set(sys, Ns[k]); });

    const Zonotope& target = reference ? *reference : terminal.back();
    const auto dirs = l1_sphere_directions(sys.state_dim(), 512, seed);

    std::vector<ConvergenceRow> rows(Ns.size());
    for (std::size_t k = 0; k < Ns.size(); ++k)
    {
        rows[k].N = Ns[k];
        rows[k].error = oracle::hausdorff_sampled(terminal[k], target, dirs);
        rows[k].order = std::numeric_limits<double>::quiet_NaN();
        if (k > 0 && rows[k].error > 0.0 && rows[k - 1].error > 0.0)
        {
            rows[k].order = std::log(rows[k - 1].error / rows[k].error) /
                            std::log(static_cast<double>(Ns[k]) / Ns[k - 1]);
        }
    }
    return rows;
}

std::vector<ScalingRow> scaling_study(const std::vector<int>& nds, int N, const FootbridgeParams& base, int jobs)
{
    std::vector<ScalingRow> rows(nds.size());
    run_cells(static_cast<int>(nds.size()), jobs,
              [&](int k)
              {
                  FootbridgeParams p = base;
                  p.nd = nds[k];
                  const LtvSystem sys = build_footbridge(p);

                  ScalingRow row;
                  row.nd = p.nd;
                  row.n = sys.state_dim();
                  const auto start = std::chrono::steady_clock::now();
                  tube_sequence(sys, N,
                                [&row](const TubeStep& step)
                                { row.generator_components += step.lambda.generators().size(); });
                  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                  rows[k] = row;
              });
    return rows;
}

void write_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows)
{
    out << "N,error,order\n";
    for (const auto& r : rows)
    {
        out << r.N << ',';
        write_number(out, r.error);
        out << ',';
        write_number(out, r.order);
        out << '\n';
    }
}

void write_csv(std::ostream& out, const std::vector<ScalingRow>& rows)
{
    out << "Nd,n,generator_components,seconds\n";
    for (const auto& r : rows)
    {
        out << r.nd << ',' << r.n << ',' << r.generator_components << ',';
        write_number(out, r.seconds);
        out << '\n';
    }
}

void write_csv(std::ostream& out, const std::vector<DisplacementRow>& rows)
{
    out << "N,Nd,bound\n";
    for (const auto& r : rows)
    {
        out << r.N << ',' << r.nd << ',';
        write_number(out, r.bound);
        out << '\n';
    }
}

double loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_slope: need at least two matching points");
    const double count = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k)
    {
        const double lx = std::log(x[k]);
        const double ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

} // namespace tubereach
