#include "test_support.hpp"

#include "tubereach/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace tubereach;
using namespace tubereach::testing;

namespace
{

oracle::InputSignal zero_input(const LtvSystem& sys, int intervals)
{
    oracle::InputSignal u;
    for (int k = 0; k <= intervals; ++k)
        u.grid.push_back(sys.t0() + (sys.tf() - sys.t0()) * k / intervals);
    u.values.assign(intervals, Eigen::VectorXd::Zero(sys.input_dim()));
    return u;
}

} // namespace

TEST_CASE("reference transition")
{
    std::mt19937_64 rng(test_seed(50));
    const LtvSystem sys = random_pencil_model(rng, 3).build();
    CHECK(oracle::reference_transition(sys, 0.7, 0.7, 10) == Eigen::MatrixXd::Identity(3, 3));

    const Eigen::MatrixXd ts = oracle::reference_transition(sys, 0.9, 1.7, 400);
    const Eigen::MatrixXd sr = oracle::reference_transition(sys, 0.2, 0.9, 400);
    const Eigen::MatrixXd tr = oracle::reference_transition(sys, 0.2, 1.7, 800);
    CHECK((ts * sr - tr).cwiseAbs().maxCoeff() <= 1e-9);

    Eigen::MatrixXd nil(2, 2);
    nil << 0, 1, 0, 0;
    PencilModel m = scalar_decay();
    m.a = HarmonicPencil::constant(nil);
    m.b = Eigen::MatrixXd::Zero(2, 1);
    m.x0 = Zonotope(Eigen::VectorXd::Zero(2));
    const Eigen::MatrixXd phi = oracle::reference_transition(m.build(), 0.25, 1.5, 3);
    Eigen::MatrixXd expect(2, 2);
    expect << 1, 1.25, 0, 1;
    CHECK((phi - expect).cwiseAbs().maxCoeff() <= 1e-15);

    CHECK_THROWS_AS(oracle::reference_transition(sys, 1.0, 0.5, 10), std::invalid_argument);
}

TEST_CASE("reference transition converges at fourth order")
{
    std::mt19937_64 rng(test_seed(51));
    const LtvSystem sys = random_pencil_model(rng, 2).build();
    const Eigen::MatrixXd fine = oracle::reference_transition(sys, 0.0, 2.0, 6400);
    const double e1 = (oracle::reference_transition(sys, 0.0, 2.0, 10) - fine).cwiseAbs().maxCoeff();
    const double e2 = (oracle::reference_transition(sys, 0.0, 2.0, 20) - fine).cwiseAbs().maxCoeff();
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("simulation")
{
    const LtvSystem sys = scalar_decay().build();
    const auto traj = oracle::simulate(sys, Eigen::VectorXd::Ones(1), zero_input(sys, 1), 1000);
    REQUIRE(traj.states.size() == 1001);
    for (std::size_t k = 0; k < traj.states.size(); ++k)
        CHECK(std::abs(traj.states[k](0) - std::exp(-traj.times[k])) <= 1e-10);

    std::mt19937_64 rng(test_seed(52));
    const LtvSystem rsys = random_pencil_model(rng, 4).build();
    const auto zero = oracle::simulate(rsys, Eigen::VectorXd::Zero(4), zero_input(rsys, 5), 10);
    for (const auto& x : zero.states)
        CHECK(x.isZero());

    const Eigen::VectorXd a = random_matrix(rng, 4, 1, 1.0);
    const Eigen::VectorXd b = random_matrix(rng, 4, 1, 1.0);
    const auto ua = zero_input(rsys, 5);
    const auto ta = oracle::simulate(rsys, a, ua, 20);
    const auto tb = oracle::simulate(rsys, b, ua, 20);
    const auto tab = oracle::simulate(rsys, a + b, ua, 20);
    for (std::size_t k = 0; k < tab.states.size(); ++k)
        CHECK((tab.states[k] - ta.states[k] - tb.states[k]).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("set integral quadrature")
{
    PencilModel m = scalar_decay();
    m.u = Zonotope(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1));
    const LtvSystem sys = m.build();
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
    CHECK(oracle::set_integral_quadrature(sys, 0.0, 1.0, one, 10000) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-6));
    CHECK(oracle::set_integral_quadrature(sys, 0.5, 0.5, one, 100) == 0.0);

    const LtvSystem still = scalar_decay().build();
    CHECK(oracle::set_integral_quadrature(still, 0.0, 1.0, one, 100) == 0.0);
}

TEST_CASE("reach sets compose over consecutive intervals")
{
    // R(b) = phi(b, a) R(a) + I(a, b) for x' = -x + u, |u| <= 1, x(0) in [0.5, 1.5]
    PencilModel m = scalar_decay();
    m.x0 = Zonotope(Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Constant(1, 1, 0.5));
    m.u = Zonotope(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1));
    const LtvSystem sys = m.build();
    for (double dir : {1.0, -1.0})
    {
        const Eigen::VectorXd d = Eigen::VectorXd::Constant(1, dir);
        const double a = 0.6, b = 1.5;
        // support of R(t) in direction +-1: e^-t (1 +- 0.5 ...) in closed form
        const auto exact = [dir](double t) { return dir * std::exp(-t) + 0.5 * std::exp(-t) + (1 - std::exp(-t)); };
        const double phi = oracle::reference_transition(sys, a, b, 200)(0, 0);
        const double composed = exact(a) * phi + oracle::set_integral_quadrature(sys, a, b, d, 10000);
        CHECK(composed == doctest::Approx(exact(b)).epsilon(1e-6));
    }
}

TEST_CASE("sampled Hausdorff distance")
{
    const Zonotope a(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1));
    const Zonotope b(Eigen::VectorXd::Constant(1, 0.5), Eigen::MatrixXd::Ones(1, 1));
    const auto d1 = l1_sphere_directions(1, 4, 1);
    CHECK(oracle::hausdorff_sampled(a, a, d1) == 0.0);
    CHECK(oracle::hausdorff_sampled(a, b, d1) == doctest::Approx(0.5));

    const Zonotope unit(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
    const Zonotope twice(Eigen::VectorXd::Zero(2), 2 * Eigen::MatrixXd::Identity(2, 2));
    CHECK(oracle::hausdorff_sampled(unit, twice, l1_sphere_directions(2, 32, 1)) == doctest::Approx(1.0));

    std::mt19937_64 rng(test_seed(53));
    for (int trial = 0; trial < 50; ++trial)
    {
        const Zonotope x = random_zonotope(rng, 2, 3);
        const Zonotope y = random_zonotope(rng, 2, 2);
        const double sampled = oracle::hausdorff_sampled(x, y, l1_sphere_directions(2, 64, trial));
        CHECK(sampled <= polygon_hausdorff(to_polygon_2d(x), to_polygon_2d(y)) + 1e-12);
    }
}

TEST_CASE("random vertices and inputs")
{
    std::mt19937_64 rng(test_seed(54));
    const Zonotope z = random_zonotope(rng, 3, 4);
    for (int k = 0; k < 20; ++k)
    {
        const Eigen::VectorXd v = oracle::random_vertex(z, rng);
        const Eigen::VectorXd s = z.generators().colPivHouseholderQr().solve(v - z.center());
        CHECK((z.generators() * s - (v - z.center())).norm() <= 1e-9);
    }

    const LtvSystem sys = random_pencil_model(rng, 2).build();
    const auto u = oracle::random_vertex_input(sys, 7, rng);
    REQUIRE(u.grid.size() == 8);
    CHECK(u.grid.front() == sys.t0());
    CHECK(u.grid.back() == sys.tf());
    CHECK(u.values.size() == 7);
}

TEST_CASE("seed from environment")
{
    ::unsetenv("TUBEREACH_SEED");
    CHECK(oracle::seed_from_env(17) == 17);
    ::setenv("TUBEREACH_SEED", "12345", 1);
    CHECK(oracle::seed_from_env(17) == 12345);
    ::unsetenv("TUBEREACH_SEED");
}
