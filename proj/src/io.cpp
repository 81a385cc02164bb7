#include "tubereach/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace tubereach::io
{

namespace
{

const json& require(const json& j, const char* key, const char* context)
{
    if (!j.is_object() || !j.contains(key))
        throw std::invalid_argument(std::string(context) + ": missing field \"" + key + "\"");
    return j.at(key);
}

double number(const json& j, const char* context)
{
    if (!j.is_number())
        throw std::invalid_argument(std::string(context) + ": expected a number");
    return j.get<double>();
}

Eigen::VectorXd vector_from_json(const json& j, const char* context)
{
    if (!j.is_array())
        throw std::invalid_argument(std::string(context) + ": expected an array of numbers");
    Eigen::VectorXd v(j.size());
    for (std::size_t k = 0; k < j.size(); ++k)
        v(k) = number(j[k], context);
    return v;
}

json vector_to_json(const Eigen::Ref<const Eigen::VectorXd>& v)
{
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k)
        out.push_back(v(k));
    return out;
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json to_json(const Zonotope& z)
{
    json gens = json::array();
    for (Eigen::Index j = 0; j < z.num_generators(); ++j)
        gens.push_back(vector_to_json(z.generators().col(j)));
    return {{"center", vector_to_json(z.center())}, {"generators", std::move(gens)}};
}

Zonotope zonotope_from_json(const json& j)
{
    Eigen::VectorXd c = vector_from_json(require(j, "center", "zonotope"), "zonotope center");
    Eigen::MatrixXd G(c.size(), 0);
    if (j.contains("generators"))
    {
        const json& gens = j.at("generators");
        if (!gens.is_array())
            throw std::invalid_argument("zonotope generators: expected a list of columns");
        G.resize(c.size(), static_cast<Eigen::Index>(gens.size()));
        for (std::size_t k = 0; k < gens.size(); ++k)
        {
            const Eigen::VectorXd col = vector_from_json(gens[k], "zonotope generator");
            if (col.size() != c.size())
                throw std::invalid_argument("zonotope generator " + std::to_string(k) +
                                            " does not match the center length");
            G.col(static_cast<Eigen::Index>(k)) = col;
        }
    }
    return {std::move(c), std::move(G)};
}

json to_json(const Eigen::MatrixXd& M)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        rows.push_back(vector_to_json(M.row(i).transpose()));
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j)
{
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("matrix: expected a nonempty list of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Eigen::MatrixXd M(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i)
    {
        const Eigen::VectorXd row = vector_from_json(j[i], "matrix row");
        if (static_cast<std::size_t>(row.size()) != cols)
            throw std::invalid_argument("matrix: rows have different lengths");
        M.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return M;
}

json to_json(const HarmonicPencil& p)
{
    json terms = json::array();
    for (const auto& t : p.terms())
        terms.push_back({{"omega", t.omega}, {"cos", to_json(t.cos_coeff)}, {"sin", to_json(t.sin_coeff)}});
    return {{"A0", to_json(p.constant_term())}, {"terms", std::move(terms)}};
}

HarmonicPencil pencil_from_json(const json& j)
{
    Eigen::MatrixXd m0 = matrix_from_json(require(j, "A0", "pencil"));
    std::vector<HarmonicTerm> terms;
    if (j.contains("terms"))
    {
        for (const auto& t : j.at("terms"))
        {
            HarmonicTerm term;
            term.omega = number(require(t, "omega", "pencil term"), "pencil term omega");
            if (t.contains("cos"))
                term.cos_coeff = matrix_from_json(t.at("cos"));
            if (t.contains("sin"))
                term.sin_coeff = matrix_from_json(t.at("sin"));
            terms.push_back(std::move(term));
        }
    }
    return HarmonicPencil(std::move(m0), std::move(terms));
}

json to_json(const PencilModel& model)
{
    json j;
    j["t0"] = model.t0;
    j["tf"] = model.tf;
    j["A"] = to_json(model.a);
    if (const auto* constant = std::get_if<Eigen::MatrixXd>(&model.b))
        j["B"] = to_json(*constant);
    else
        j["B"] = to_json(std::get<HarmonicPencil>(model.b));
    j["X0"] = to_json(model.x0);
    j["U"] = to_json(model.u);

    json bounds = json::object();
    const BoundOverride& o = model.bounds;
    if (o.a) bounds["M_A"] = *o.a;
    if (o.a_dot) bounds["M_Adot"] = *o.a_dot;
    if (o.a_dot_dot) bounds["M_Addot"] = *o.a_dot_dot;
    if (o.b) bounds["M_B"] = *o.b;
    if (o.b_dot) bounds["M_Bdot"] = *o.b_dot;
    if (!bounds.empty())
        j["bounds"] = std::move(bounds);
    return j;
}

PencilModel model_from_json(const json& j)
{
    PencilModel model;
    model.t0 = number(require(j, "t0", "system"), "system t0");
    model.tf = number(require(j, "tf", "system"), "system tf");
    model.a = pencil_from_json(require(j, "A", "system"));

    const json& b = require(j, "B", "system");
    if (b.is_object())
        model.b = pencil_from_json(b);
    else
        model.b = matrix_from_json(b);

    model.x0 = zonotope_from_json(require(j, "X0", "system"));
    model.u = zonotope_from_json(require(j, "U", "system"));

    if (j.contains("bounds"))
    {
        const json& bj = j.at("bounds");
        auto read = [&bj](const char* key, std::optional<double>& slot)
        {
            if (bj.contains(key))
                slot = number(bj.at(key), key);
        };
        read("M_A", model.bounds.a);
        read("M_Adot", model.bounds.a_dot);
        read("M_Addot", model.bounds.a_dot_dot);
        read("M_B", model.bounds.b);
        read("M_Bdot", model.bounds.b_dot);
    }
    return model;
}

Region region_from_json(const json& j)
{
    Region region;
    const json& list = require(j, "halfspaces", "region");
    if (!list.is_array() || list.empty())
        throw std::invalid_argument("region: halfspaces must be a nonempty list");
    for (const auto& h : list)
    {
        region.halfspaces.emplace_back(vector_from_json(require(h, "a", "halfspace"), "halfspace a"),
                                       number(require(h, "b", "halfspace"), "halfspace b"));
    }

    const std::string mode = j.value("mode", "avoid_any");
    if (mode == "avoid_any")
        region.mode = RegionMode::AvoidAny;
    else if (mode == "avoid_polytope")
        region.mode = RegionMode::AvoidPolytope;
    else
        throw std::invalid_argument("region: unknown mode \"" + mode + "\"");
    return region;
}

json to_json(const Region& region)
{
    json list = json::array();
    for (const auto& h : region.halfspaces)
        list.push_back({{"a", vector_to_json(h.a)}, {"b", h.b}});
    return {{"halfspaces", std::move(list)},
            {"mode", region.mode == RegionMode::AvoidAny ? "avoid_any" : "avoid_polytope"}};
}

json to_json(const Verdict& v)
{
    return {{"status", to_string(v.status)}, {"margin", v.margin}, {"witness_step", v.witness_step}};
}

json to_json(const ReachStep& step)
{
    return {{"i", step.index}, {"t", step.t}, {"zonotope", to_json(step.omega)}};
}

json to_json(const TubeStep& step)
{
    return {{"i", step.index},
            {"t_prev", step.t_prev},
            {"t", step.t},
            {"omega", to_json(step.omega)},
            {"lambda", to_json(step.lambda)},
            {"m_prev", step.m_prev},
            {"radii", {{"reach", step.reach_radius}, {"tube", step.tube_radius}}}};
}

json to_json(const Polygon& poly)
{
    json out = json::array();
    for (const auto& v : poly)
        out.push_back({v.x(), v.y()});
    return out;
}

json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open " + path);
    try
    {
        return json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

} // namespace tubereach::io
