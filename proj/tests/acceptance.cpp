// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include "test_support.hpp"

#include "tubereach/benchmark.hpp"
#include "tubereach/io.hpp"
#include "tubereach/oracle.hpp"
#include "tubereach/reach.hpp"
#include "tubereach/safety.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace tubereach;
using namespace tubereach::testing;

namespace
{

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

Zonotope terminal(const LtvSystem& sys, int N)
{
    Zonotope last;
    reach_sequence(sys, N, [&](const ReachStep& s) { last = s.omega; });
    return last;
}

Outcome soundness()
{
    std::mt19937_64 rng(test_seed(101));
    struct Case
    {
        std::string name;
        PencilModel model;
        int N;
    };
    std::vector<Case> cases{{"scalar", scalar_decay(), 20}, {"footbridge", footbridge_model({}), 40}};
    for (int k = 0; k < 5; ++k)
        cases.push_back({"pencil" + std::to_string(k), random_pencil_model(rng, k % 2 == 0 ? 2 : 4), 16});

    long checks = 0;
    long violations = 0;
    double worst = -INFINITY;
    std::string failing;
    for (const auto& c : cases)
    {
        const LtvSystem sys = c.model.build();
        oracle::ContainmentOptions opt;
        opt.trajectories = 200;
        opt.switches_per_step = 8;
        opt.tol = 1e-9;
        opt.seed = test_seed(102 + checks);
        const auto dirs = l1_sphere_directions(sys.state_dim(), 128, opt.seed);
        const auto report = oracle::check_containment(sys, c.N, dirs, opt);
        checks += report.checks;
        violations += report.violations;
        worst = std::max(worst, report.worst_excess);
        if (report.violations > 0)
            failing += " " + c.name;
    }
    return {violations == 0 && checks > 0,
            std::to_string(cases.size()) + " systems, " + std::to_string(checks) + " support checks, " +
                std::to_string(violations) + " violations, worst excess " + fmt(worst) +
                (failing.empty() ? "" : ", failing:" + failing)};
}

Outcome convergence()
{
    const LtvSystem scalar = scalar_decay().build();
    const std::vector<int> ns{25, 50, 100, 200};
    std::vector<double> err;
    for (int N : ns)
    {
        const Zonotope z = terminal(scalar, N);
        err.push_back(std::abs(z.center()(0) + z.generators().cwiseAbs().sum() - std::exp(-2.0)));
    }
    bool pass = true;
    std::string scalar_orders;
    for (std::size_t k = 1; k < ns.size(); ++k)
    {
        const double order = std::log(err[k - 1] / err[k]) / std::log(double(ns[k]) / ns[k - 1]);
        pass = pass && order >= 0.8 && order <= 1.2;
        scalar_orders += (k > 1 ? "," : "") + fmt(order);
    }

    const LtvSystem mathieu = build_footbridge({});
    const auto rows = convergence_study(mathieu, {50, 100, 200, 400}, std::nullopt, test_seed(103), 4);
    std::string mathieu_orders;
    bool mathieu_pass = true;
    for (const auto& r : rows)
    {
        if (std::isnan(r.order) || r.error == 0.0)
            continue;
        mathieu_pass = mathieu_pass && r.order >= 0.8;
        mathieu_orders += (mathieu_orders.empty() ? "" : ",") + fmt(r.order);
    }
    return {pass && mathieu_pass && !mathieu_orders.empty(),
            "scalar orders [" + scalar_orders + "] (need [0.8, 1.2]), Mathieu self-convergence orders [" +
                mathieu_orders + "] (need >= 0.8)"};
}

Outcome consistency()
{
    const LtvSystem sys = build_footbridge({});
    std::mt19937_64 rng(test_seed(104));
    const std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
    std::vector<double> s(32);
    for (double& v : s)
        v = uniform(rng, sys.t0(), sys.tf() - hs.front());

    bool within = true;
    double worst_fraction = 0.0;
    std::vector<double> mean_err;
    for (double h : hs)
    {
        double sum = 0.0;
        for (double sk : s)
        {
            const Eigen::MatrixXd ref = oracle::reference_transition(sys, sk, sk + h, 400);
            const double e = matrix_norm_inf(ref - transition_approx(sys, sk, h));
            within = within && e <= theta(sys, h);
            worst_fraction = std::max(worst_fraction, e / theta(sys, h));
            sum += e;
        }
        mean_err.push_back(sum / s.size());
    }
    bool cubic = true;
    std::string ratios;
    for (std::size_t k = 1; k < hs.size(); ++k)
    {
        const double ratio = mean_err[k - 1] / mean_err[k];
        cubic = cubic && ratio >= 8.0 * 0.7 && ratio <= 8.0 * 1.3;
        ratios += (k > 1 ? "," : "") + fmt(ratio);
    }
    return {within && cubic, "max error/theta " + fmt(worst_fraction) + ", halving ratios [" + ratios +
                                 "] (need 8 +- 30%)"};
}

Outcome generator_counts()
{
    std::mt19937_64 rng(test_seed(105));
    int shapes = 0;
    long mismatches = 0;
    for (Eigen::Index n : {1, 2, 3, 5})
    {
        for (Eigen::Index p : {0, 1, 3})
        {
            for (Eigen::Index q : {0, 1, 2, 4})
            {
                PencilModel m = random_pencil_model(rng, n);
                const Eigen::Index inputs = std::get<HarmonicPencil>(m.b).cols();
                m.x0 = random_zonotope(rng, n, p, 0.5);
                m.u = random_zonotope(rng, inputs, q, 0.3);
                const LtvSystem sys = m.build();
                ++shapes;
                tube_sequence(sys, 50,
                              [&](const TubeStep& s)
                              {
                                  const Eigen::Index i = s.index;
                                  if (s.omega.num_generators() != p + i * (q + n))
                                      ++mismatches;
                                  if (s.lambda.num_generators() != 2 * p + 1 + (2 * i - 1) * (q + n))
                                      ++mismatches;
                              });
            }
        }
    }
    return {mismatches == 0, std::to_string(shapes) + " (p, q, n) shapes x 50 steps, " + std::to_string(mismatches) +
                                 " mismatches"};
}

Outcome hull_bounds()
{
    std::mt19937_64 rng(test_seed(106));
    int failures = 0;
    double worst_enclose = -INFINITY;
    double worst_shift = -INFINITY;
    for (int trial = 0; trial < 500; ++trial)
    {
        const Eigen::Index q = 1 + trial % 4;
        const Zonotope a = random_zonotope(rng, 2, q);
        const Zonotope b = random_zonotope(rng, 2, q);
        const Polygon hull = union_hull(to_polygon_2d(a), to_polygon_2d(b));
        const Polygon enc = to_polygon_2d(enclose(a, b));
        const double bound = norm_inf(Eigen::VectorXd::Zero(2), a.generators() - b.generators());
        const double d1 = polygon_hausdorff(hull, enc);
        worst_enclose = std::max(worst_enclose, d1 - bound);
        if (!polygon_contains(enc, hull, 1e-9) || d1 > bound + 1e-9)
            ++failures;

        const Zonotope w = random_box(rng, 2, 0.5);
        const Polygon pw = to_polygon_2d(w);
        const Polygon pa = to_polygon_2d(a);
        const Polygon pb = to_polygon_2d(b);
        const Polygon lhs = union_hull(pa, polygon_sum(pb, pw));
        const Polygon rhs = polygon_sum(union_hull(pa, pb), pw);
        const double d2 = polygon_hausdorff(lhs, rhs);
        worst_shift = std::max(worst_shift, d2 - norm_inf(w));
        if (!polygon_contains(rhs, lhs, 1e-9) || d2 > norm_inf(w) + 1e-9)
            ++failures;
    }
    return {failures == 0, "500 instances, " + std::to_string(failures) + " failures, worst slack (distance - bound) " +
                               fmt(worst_enclose) + " / " + fmt(worst_shift)};
}

Outcome input_term()
{
    std::mt19937_64 rng(test_seed(107));
    int failures = 0;
    double worst = -INFINITY;
    for (int trial = 0; trial < 20; ++trial)
    {
        const LtvSystem sys = random_pencil_model(rng, 2).build();
        const auto dirs = l1_sphere_directions(2, 12, test_seed(108 + trial));
        for (double len : {0.05, 0.1, 0.2})
        {
            const double a = uniform(rng, sys.t0(), sys.tf() - len);
            const double b = a + len;
            const double alpha = inflation(sys, len).alpha;
            double dist = 0.0;
            for (const auto& d : dirs)
            {
                const double exact = oracle::set_integral_quadrature(sys, a, b, d, 10000);
                const double approx = len * support(sys.input_set(), Eigen::VectorXd(sys.b(b).transpose() * d));
                dist = std::max(dist, std::abs(exact - approx));
            }
            worst = std::max(worst, dist / alpha);
            if (dist > alpha + 1e-6)
                ++failures;
        }
    }
    return {failures == 0, "20 systems x 3 lengths x 16 directions, " + std::to_string(failures) +
                               " failures, max distance/alpha " + fmt(worst)};
}

Outcome footbridge_reproduction()
{
    const LtvSystem sys = build_footbridge({});
    std::vector<double> bounds;
    for (int N : {100, 200, 400})
    {
        DisplacementMonitor monitor(4);
        tube_sequence(sys, N, [&](const TubeStep& s) { monitor.observe(s); });
        bounds.push_back(monitor.bound());
    }
    const bool decreasing = bounds[0] > bounds[1] && bounds[1] > bounds[2];

    const auto rows = scaling_study({4, 6, 8, 10, 12}, 100, {}, 4);
    std::vector<double> n, comps;
    for (const auto& r : rows)
    {
        n.push_back(double(r.n));
        comps.push_back(double(r.generator_components));
    }
    const double slope = loglog_slope(n, comps);
    return {decreasing && std::abs(slope - 2.0) <= 0.3,
            "displacement bounds " + fmt(bounds[0]) + " > " + fmt(bounds[1]) + " > " + fmt(bounds[2]) +
                ", generator-component slope " + fmt(slope) + " (need 2 +- 0.3)"};
}

Outcome safety_contract()
{
    const LtvSystem sys = scalar_decay().build();
    HalfspaceMonitor safe(Halfspace(Eigen::VectorXd::Ones(1), 1.1));
    HalfspaceMonitor unknown(Halfspace(Eigen::VectorXd::Ones(1), 1.0));
    tube_sequence(sys, 20,
                  [&](const TubeStep& s)
                  {
                      safe.observe(s);
                      unknown.observe(s);
                  });
    // largest support 0.9525 + 0.0475 + (e^0.1 - 1.1) + (e^0.1 - 1.105), attained on the first step
    const double top = 0.9525 + 0.0475 + (std::exp(0.1) - 1.1) + (std::exp(0.1) - 1.105);
    const Verdict vs = safe.verdict();
    const Verdict vu = unknown.verdict();
    const bool pass = vs.status == VerdictStatus::Safe && vu.status == VerdictStatus::Unknown &&
                      std::abs(vs.margin - (1.1 - top)) <= 1e-9 && std::abs(vu.margin - (1.0 - top)) <= 1e-9;
    return {pass, std::string("{x >= 1.1} ") + to_string(vs.status) + " margin " + io::format_double(vs.margin) +
                      ", {x >= 1.0} " + to_string(vu.status) + " margin " + io::format_double(vu.margin)};
}

} // namespace

int main()
{
    struct Criterion
    {
        int id;
        const char* name;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "soundness", 120, soundness},
        {2, "first-order convergence", 60, convergence},
        {3, "transition consistency bound", 30, consistency},
        {4, "generator counts", 5, generator_counts},
        {5, "enclosure and convex-hull bounds", 30, hull_bounds},
        {6, "input-term estimate", 60, input_term},
        {7, "footbridge displacement and scaling", 300, footbridge_reproduction},
        {8, "safety contract", 1, safety_contract},
    };

    int failed = 0;
    for (const auto& c : criteria)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.limit_seconds;
        const bool pass = o.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("[%s] %d %s: %s; %.2fs (limit %gs)%s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    secs, c.limit_seconds, in_time ? "" : " TIME LIMIT EXCEEDED");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
