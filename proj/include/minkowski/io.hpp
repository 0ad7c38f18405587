#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "minkowski/birkhoff.hpp"
#include "minkowski/bodies.hpp"
#include "minkowski/core.hpp"
#include "minkowski/monotone.hpp"
#include "minkowski/norms.hpp"
#include "minkowski/projection.hpp"
#include "minkowski/subdifferential.hpp"

namespace minkowski::io {

using Json = nlohmann::ordered_json;

// Parsing errors are reported as ParseError with the offending field path,
// e.g. "norm.p: expected a number".

// "3,0" or "3 0" -> (3, 0).
Vector parse_vector_text(const std::string& text, const std::string& field = "vector");
// Accepts inline JSON or the shorthand "euclidean".
Json parse_json_text(const std::string& text, const std::string& field);

Vector vector_from_json(const Json& j, const std::string& field = "vector");
// {"dual": [...]} or a bare array.
Functional functional_from_json(const Json& j, const std::string& field = "functional");
Hyperplane hyperplane_from_json(const Json& j, const std::string& field = "hyperplane");
Tolerances tolerances_from_json(const Json& j, Tolerances base = {}, const std::string& field = "tolerances");

// {"type":"euclidean"}, {"type":"p","p":4,"weights":[...]},
// {"type":"ellipsoid","A":[[...]]}, or the string "euclidean". `dim` is
// used when the JSON does not fix the dimension itself.
Norm norm_from_json(const Json& j, std::optional<int> dim, const Tolerances& tol = {},
                    const std::string& field = "norm");
// Dimension fixed by the norm JSON, if any.
std::optional<int> norm_spec_dimension(const Json& j);

// {"type":"polytope","vertices":[...]}, {"type":"ball","center":[...],
// "radius":r[,"norm":...]}, {"type":"parallel","base":{...},"delta":d[,"norm":...]}.
// Ball and parallel bodies default to the ambient norm.
ConvexBody body_from_json(const Json& j, const Norm& ambient, const Tolerances& tol = {},
                          const std::string& field = "body");

// {"type":"max_affine","pieces":[{"phi":[...],"b":0}]} or
// {"type":"distance","body":{...}[,"norm":...]}. A top-level {"f": {...}}
// wrapper is accepted.
ConvexFunction function_from_json(const Json& j, const Norm& ambient, const Tolerances& tol = {},
                                  const std::string& field = "f");

// {"pairs":[{"x":[...],"w":[...]}, ...], "base_index": 0}, or a bare list of
// pairs (each {"x","w"} or [[x...],[w...]]).
MonotoneData monotone_from_json(const Json& j, const std::string& field = "pairs");

struct Scenario {
  Json norm;
  std::optional<Json> body;
  std::optional<Json> function;
  std::map<std::string, std::vector<Vector>> points;
  std::map<std::string, std::vector<Vector>> vectors;
  std::uint64_t seed = 0;
  Tolerances tolerances;
};

Scenario scenario_from_json(const Json& j);

Json to_json(const Vector& v);
Json to_json(const Functional& phi);
Json to_json(const Hyperplane& h);
Json to_json(const Tolerances& t);
Json to_json(const ProjectionResult& r);
Json to_json(const OrthogonalityReport& r);
Json to_json(const SubgradientCertificate& c);
Json to_json(const EstimateReport& r);
Json to_json(const MonotoneReport& r);
// JSON description of a max-affine function (re-parses with function_from_json).
Json function_to_json(const ConvexFunction& f);

}  // namespace minkowski::io
