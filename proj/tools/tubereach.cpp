// tubereach: batch front end for reach sets, tubes, verification and studies.

#include "tubereach/benchmark.hpp"
#include "tubereach/io.hpp"
#include "tubereach/oracle.hpp"
#include "tubereach/reach.hpp"
#include "tubereach/safety.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

using namespace tubereach;
using io::json;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnknown = 2;

struct Options
{
    std::string system_file;
    std::string model;
    int nd = 4;
    int N = 100;
    std::string out = "-";
    std::vector<int> project;
    std::string region_file;
    std::vector<int> Ns;
    std::vector<int> Nds;
    bool safety_margin = true;
    bool no_store = false;
    int jobs = 1;
    bool oracle_check = false;
    std::string run = "tube";
    std::string system_out;
};

// Owns either a file or borrows std::cout.
class Output
{
    public:
        explicit Output(const std::string& path)
        {
            if (path.empty())
                throw std::invalid_argument("output path must be nonempty");
            if (path != "-")
            {
                file_ = std::make_unique<std::ofstream>(path);
                if (!*file_)
                    throw std::invalid_argument("cannot open " + path + " for writing");
            }
        }

        std::ostream& stream() { return file_ ? *file_ : std::cout; }

        void line(const json& j) { stream() << j.dump() << '\n'; }

        void finish()
        {
            stream().flush();
            if (!stream())
                throw std::runtime_error("write failed");
        }

    private:
        std::unique_ptr<std::ofstream> file_;
};

PencilModel scalar_decay_model()
{
    PencilModel m;
    m.t0 = 0.0;
    m.tf = 2.0;
    m.a = HarmonicPencil::constant(Eigen::MatrixXd::Constant(1, 1, -1.0));
    m.b = Eigen::MatrixXd::Constant(1, 1, 1.0);
    m.x0 = Zonotope(Eigen::VectorXd::Constant(1, 1.0));
    m.u = Zonotope(Eigen::VectorXd::Zero(1));
    return m;
}

PencilModel load_model(const Options& opt)
{
    if (!opt.system_file.empty() && !opt.model.empty())
        throw std::invalid_argument("give either --system or --model, not both");
    if (!opt.system_file.empty())
        return io::model_from_json(io::load_json_file(opt.system_file));
    if (opt.model == "footbridge")
    {
        FootbridgeParams p;
        p.nd = opt.nd;
        return footbridge_model(p);
    }
    if (opt.model == "scalar-decay")
        return scalar_decay_model();
    if (opt.model.empty())
        throw std::invalid_argument("a system is required (--system FILE or --model NAME)");
    throw std::invalid_argument("unknown model \"" + opt.model + "\" (expected footbridge or scalar-decay)");
}

void check_N(int N)
{
    if (N < 1)
        throw std::invalid_argument("N must be ≥ 1");
}

std::optional<std::pair<Eigen::Index, Eigen::Index>> projection(const Options& opt, Eigen::Index n)
{
    if (opt.project.empty())
        return std::nullopt;
    if (opt.project.size() != 2)
        throw std::invalid_argument("--project expects two dimensions i,j");
    const int i = opt.project[0];
    const int j = opt.project[1];
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
        throw std::invalid_argument("projection dims must be distinct and in [0, " + std::to_string(n) + ")");
    return std::make_pair(Eigen::Index(i), Eigen::Index(j));
}

json polygon_of(const Zonotope& z, std::pair<Eigen::Index, Eigen::Index> dims)
{
    return io::to_json(to_polygon_2d(project(z, dims.first, dims.second)));
}

ReachOptions reach_options(const Options& opt)
{
    ReachOptions r;
    r.safety_margin = opt.safety_margin;
    return r;
}

int oracle_check(const LtvSystem& sys, const Options& opt)
{
    oracle::ContainmentOptions co;
    co.seed = oracle::seed_from_env(1);
    const auto dirs = l1_sphere_directions(sys.state_dim(), 16, co.seed);
    const auto report = oracle::check_containment(sys, opt.N, dirs, co);
    std::cerr << "oracle check: " << report.checks << " checks, " << report.violations
              << " violations, worst excess " << io::format_double(report.worst_excess) << '\n';
    return report.violations == 0 ? kExitOk : kExitError;
}

int run_reach(const Options& opt)
{
    check_N(opt.N);
    const LtvSystem sys = load_model(opt).build();
    const auto dims = projection(opt, sys.state_dim());
    Output out(opt.out);
    reach_sequence(sys, opt.N,
                   [&](const ReachStep& step)
                   {
                       json j = io::to_json(step);
                       if (dims)
                           j["polygon"] = polygon_of(step.omega, *dims);
                       out.line(j);
                   },
                   reach_options(opt));
    out.finish();
    return opt.oracle_check ? oracle_check(sys, opt) : kExitOk;
}

int run_tube(const Options& opt)
{
    check_N(opt.N);
    const LtvSystem sys = load_model(opt).build();
    const auto dims = projection(opt, sys.state_dim());
    Output out(opt.out);
    tube_sequence(sys, opt.N,
                  [&](const TubeStep& step)
                  {
                      json j;
                      if (opt.no_store)
                      {
                          j = {{"i", step.index},
                               {"t_prev", step.t_prev},
                               {"t", step.t},
                               {"m_prev", step.m_prev},
                               {"radii", {{"reach", step.reach_radius}, {"tube", step.tube_radius}}},
                               {"generators", step.lambda.num_generators()}};
                      }
                      else
                      {
                          j = io::to_json(step);
                      }
                      if (dims)
                      {
                          j["omega_polygon"] = polygon_of(step.omega, *dims);
                          j["lambda_polygon"] = polygon_of(step.lambda, *dims);
                      }
                      out.line(j);
                  },
                  reach_options(opt));
    out.finish();
    return opt.oracle_check ? oracle_check(sys, opt) : kExitOk;
}

int run_verify(const Options& opt)
{
    check_N(opt.N);
    if (opt.region_file.empty())
        throw std::invalid_argument("verify needs --region FILE");
    const LtvSystem sys = load_model(opt).build();
    const Region region = io::region_from_json(io::load_json_file(opt.region_file));
    for (const auto& h : region.halfspaces)
    {
        if (h.a.size() != sys.state_dim())
            throw std::invalid_argument("region normal has length " + std::to_string(h.a.size()) +
                                        " but the system dimension is " + std::to_string(sys.state_dim()));
    }

    RegionMonitor monitor(region);
    tube_sequence(sys, opt.N, [&](const TubeStep& step) { monitor.observe(step); }, reach_options(opt));
    const Verdict v = monitor.verdict();

    Output out(opt.out);
    json j = io::to_json(v);
    j["N"] = opt.N;
    out.line(j);
    out.finish();
    return v.status == VerdictStatus::Safe ? kExitOk : kExitUnknown;
}

int run_convergence(const Options& opt)
{
    const LtvSystem sys = load_model(opt).build();
    const auto rows = convergence_study(sys, opt.Ns, std::nullopt, oracle::seed_from_env(1), opt.jobs);
    Output out(opt.out);
    write_csv(out.stream(), rows);
    out.finish();
    return kExitOk;
}

int run_scaling(const Options& opt)
{
    check_N(opt.N);
    if (opt.Nds.empty())
        throw std::invalid_argument("scaling needs --Nds");
    const auto rows = scaling_study(opt.Nds, opt.N, FootbridgeParams{}, opt.jobs);
    Output out(opt.out);
    write_csv(out.stream(), rows);
    out.finish();
    return kExitOk;
}

int run_footbridge(Options opt)
{
    opt.system_file.clear();
    opt.model = "footbridge";

    if (!opt.system_out.empty())
    {
        FootbridgeParams p;
        p.nd = opt.nd;
        std::ofstream f(opt.system_out);
        if (!f)
            throw std::invalid_argument("cannot open " + opt.system_out + " for writing");
        f << io::to_json(footbridge_model(p)).dump(2) << '\n';
    }

    if (opt.run == "reach")
        return run_reach(opt);
    if (opt.run == "tube")
        return run_tube(opt);
    if (opt.run == "verify")
        return run_verify(opt);
    if (opt.run == "convergence")
        return run_convergence(opt);
    if (opt.run == "displacement")
    {
        std::vector<int> Ns = opt.Ns.empty() ? std::vector<int>{opt.N} : opt.Ns;
        FootbridgeParams p;
        p.nd = opt.nd;
        const LtvSystem sys = build_footbridge(p);
        std::vector<DisplacementRow> rows;
        for (int N : Ns)
        {
            check_N(N);
            DisplacementMonitor monitor(opt.nd);
            tube_sequence(sys, N, [&](const TubeStep& step) { monitor.observe(step); }, reach_options(opt));
            rows.push_back({N, opt.nd, monitor.bound()});
        }
        Output out(opt.out);
        write_csv(out.stream(), rows);
        out.finish();
        return kExitOk;
    }
    if (opt.run == "none")
        return kExitOk;
    throw std::invalid_argument("unknown --run \"" + opt.run + "\"");
}

void add_system_options(CLI::App* cmd, Options& opt)
{
    cmd->add_option("--system", opt.system_file, "System JSON file");
    cmd->add_option("--model", opt.model, "Built-in model: footbridge | scalar-decay");
    cmd->add_option("--Nd", opt.nd, "Footbridge spatial grid parameter")->capture_default_str();
}

void add_run_options(CLI::App* cmd, Options& opt)
{
    cmd->add_option("--N", opt.N, "Number of time steps")->capture_default_str();
    cmd->add_option("--out", opt.out, "Output file, - for stdout")->capture_default_str();
    cmd->add_flag("--safety-margin,!--no-safety-margin", opt.safety_margin,
                  "Multiply inflation radii by 1 + 1e-12 (default on)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Zonotopic reach sets and tubes for linear time-varying systems"};
    app.require_subcommand(1);
    Options opt;

    auto* reach = app.add_subcommand("reach", "Stream reach sets {i, t, zonotope} as JSONL");
    add_system_options(reach, opt);
    add_run_options(reach, opt);
    reach->add_option("--project", opt.project, "Also emit the 2D polygon of dims i,j")->delimiter(',');
    reach->add_flag("--oracle-check", opt.oracle_check)->group("");

    auto* tube = app.add_subcommand("tube", "Stream tube steps as JSONL");
    add_system_options(tube, opt);
    add_run_options(tube, opt);
    tube->add_option("--project", opt.project, "Also emit 2D polygons of dims i,j")->delimiter(',');
    tube->add_flag("--no-store", opt.no_store, "Emit step summaries without the zonotopes");
    tube->add_flag("--oracle-check", opt.oracle_check)->group("");

    auto* verify = app.add_subcommand("verify", "Check a tube against unsafe regions (exit 0 Safe, 2 Unknown)");
    add_system_options(verify, opt);
    add_run_options(verify, opt);
    verify->add_option("--region", opt.region_file, "Region JSON file")->required();

    auto* footbridge = app.add_subcommand("footbridge", "Generate the footbridge model and run a command on it");
    footbridge->add_option("--Nd", opt.nd, "Spatial grid parameter")->capture_default_str();
    add_run_options(footbridge, opt);
    footbridge
        ->add_option("--run", opt.run, "reach | tube | verify | convergence | displacement | none")
        ->capture_default_str();
    footbridge->add_option("--system-out", opt.system_out, "Write the model as system JSON");
    footbridge->add_option("--region", opt.region_file, "Region JSON file (for --run verify)");
    footbridge->add_option("--Ns", opt.Ns, "N values (for convergence or displacement)")->delimiter(',');
    footbridge->add_option("--project", opt.project, "Also emit 2D polygons of dims i,j")->delimiter(',');
    footbridge->add_flag("--no-store", opt.no_store, "Emit step summaries without the zonotopes");
    footbridge->add_option("--jobs", opt.jobs, "Worker threads")->capture_default_str();

    auto* convergence = app.add_subcommand("convergence", "Self-convergence table N,error,order as CSV");
    add_system_options(convergence, opt);
    convergence->add_option("--Ns", opt.Ns, "Strictly increasing N values")->delimiter(',')->required();
    convergence->add_option("--out", opt.out, "Output file, - for stdout")->capture_default_str();
    convergence->add_option("--jobs", opt.jobs, "Worker threads")->capture_default_str();

    auto* scaling = app.add_subcommand("scaling", "Footbridge cost table Nd,n,generator_components,seconds as CSV");
    scaling->add_option("--Nds", opt.Nds, "Nd values")->delimiter(',')->required();
    scaling->add_option("--N", opt.N, "Number of time steps")->capture_default_str();
    scaling->add_option("--out", opt.out, "Output file, - for stdout")->capture_default_str();
    scaling->add_option("--jobs", opt.jobs, "Worker threads")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return kExitError;
    }

    try
    {
        if (opt.jobs < 1)
            throw std::invalid_argument("--jobs must be ≥ 1");
        if (*reach)
            return run_reach(opt);
        if (*tube)
            return run_tube(opt);
        if (*verify)
            return run_verify(opt);
        if (*footbridge)
            return run_footbridge(opt);
        if (*convergence)
            return run_convergence(opt);
        if (*scaling)
            return run_scaling(opt);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
