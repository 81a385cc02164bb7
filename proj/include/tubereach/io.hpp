#ifndef TUBEREACH_IO_HPP_
#define TUBEREACH_IO_HPP_

#include "tubereach/reach.hpp"
#include "tubereach/safety.hpp"
#include "tubereach/system.hpp"
#include "tubereach/zonotope.hpp"

#include <json.hpp>

#include <string>

namespace tubereach::io
{

using json = nlohmann::json;

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// {"center": [...], "generators": [[column], ...]}
json to_json(const Zonotope& z);
Zonotope zonotope_from_json(const json& j);

/// Row-major nested arrays.
json to_json(const Eigen::MatrixXd& M);
Eigen::MatrixXd matrix_from_json(const json& j);

json to_json(const HarmonicPencil& p);
HarmonicPencil pencil_from_json(const json& j);

/**
 * System description:
 * {"t0": .., "tf": .., "A": {"A0": [[..]], "terms": [{"omega": .., "cos": [[..]], "sin": [[..]]}]},
 *  "B": [[..]] or pencil object, "X0": zonotope, "U": zonotope,
 *  "bounds": {"M_A": .., "M_Adot": .., "M_Addot": .., "M_B": .., "M_Bdot": ..}}  (bounds optional, partial)
 */
json to_json(const PencilModel& model);
PencilModel model_from_json(const json& j);

/// {"halfspaces": [{"a": [..], "b": ..}], "mode": "avoid_any" | "avoid_polytope"}
Region region_from_json(const json& j);
json to_json(const Region& region);

json to_json(const Verdict& v);

/// {"i", "t", "zonotope"}
json to_json(const ReachStep& step);

/// {"i", "t_prev", "t", "omega", "lambda", "m_prev", "radii": {"reach", "tube"}}
json to_json(const TubeStep& step);

/// [[x, y], ...]
json to_json(const Polygon& poly);

json load_json_file(const std::string& path);

} // namespace tubereach::io

#endif
