#include "minkowski/io.hpp"

#include <cmath>
#include <sstream>

namespace minkowski::io {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ParseError(field + ": " + what); }

const Json& member(const Json& j, const std::string& key, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(field + "." + key, "missing");
  return *it;
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "expected a finite number");
  return v;
}

std::string type_of(const Json& j, const std::string& field) {
  const Json& t = member(j, "type", field);
  if (!t.is_string()) fail(field + ".type", "expected a string");
  return t.get<std::string>();
}

std::vector<Vector> vector_list(const Json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of vectors");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(vector_from_json(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

// Re-raises library domain errors as parse errors tagged with the field.
template <class F>
auto tagged(const std::string& field, F&& make) {
  try {
    return make();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(field, e.what());
  }
}

}  // namespace

Vector parse_vector_text(const std::string& text, const std::string& field) {
  std::string s = text;
  for (char& c : s)
    if (c == ',' || c == ';' || c == '[' || c == ']') c = ' ';
  std::istringstream in(s);
  std::vector<double> vals;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(v)) fail(field, "bad number '" + tok + "'");
      vals.push_back(v);
    } catch (const std::logic_error&) {
      fail(field, "bad number '" + tok + "'");
    }
  }
  if (vals.empty()) fail(field, "empty vector");
  return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Json parse_json_text(const std::string& text, const std::string& field) {
  if (text == "euclidean") return Json("euclidean");
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(field, std::string("invalid JSON: ") + e.what());
  }
}

Vector vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a nonempty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

Functional functional_from_json(const Json& j, const std::string& field) {
  if (j.is_object()) return Functional(vector_from_json(member(j, "dual", field), field + ".dual"));
  return Functional(vector_from_json(j, field));
}

Hyperplane hyperplane_from_json(const Json& j, const std::string& field) {
  const Functional normal = functional_from_json(member(j, "normal", field), field + ".normal");
  double offset = 0.0;
  if (j.contains("offset")) offset = number(j["offset"], field + ".offset");
  return tagged(field, [&] { return Hyperplane(normal, offset); });
}

Tolerances tolerances_from_json(const Json& j, Tolerances base, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
  for (const auto& [key, val] : j.items()) {
    const std::string f = field + "." + key;
    if (key == "eq_tol")
      base.eq_tol = number(val, f);
    else if (key == "fd_step")
      base.fd_step = number(val, f);
    else if (key == "opt_gap")
      base.opt_gap = number(val, f);
    else if (key == "max_iter") {
      if (!val.is_number_integer()) fail(f, "expected an integer");
      base.max_iter = val.get<int>();
    } else
      fail(f, "unknown tolerance");
  }
  tagged(field, [&] {
    base.validate();
    return 0;
  });
  return base;
}

std::optional<int> norm_spec_dimension(const Json& j) {
  if (!j.is_object()) return std::nullopt;
  if (j.contains("dim") && j["dim"].is_number_integer()) return j["dim"].get<int>();
  if (j.contains("weights") && j["weights"].is_array()) return static_cast<int>(j["weights"].size());
  if (j.contains("A") && j["A"].is_array()) return static_cast<int>(j["A"].size());
  return std::nullopt;
}

Norm norm_from_json(const Json& j, std::optional<int> dim, const Tolerances& tol, const std::string& field) {
  (void)tol;
  std::string type;
  if (j.is_string())
    type = j.get<std::string>();
  else
    type = type_of(j, field);
  if (const auto d = norm_spec_dimension(j)) {
    if (dim && *dim != *d) fail(field, "dimension " + std::to_string(*d) + " does not match " + std::to_string(*dim));
    dim = d;
  }
  auto need_dim = [&] {
    if (!dim) fail(field, "dimension cannot be inferred; add \"dim\"");
    if (*dim < 1) fail(field, "dimension must be positive");
    return *dim;
  };
  if (type == "euclidean") return Norm::euclidean(need_dim());
  if (type == "p") {
    const double p = number(member(j, "p", field), field + ".p");
    Eigen::VectorXd w = j.contains("weights") ? Eigen::VectorXd(vector_from_json(j["weights"], field + ".weights"))
                                              : Eigen::VectorXd(Eigen::VectorXd::Ones(need_dim()));
    return tagged(field, [&] { return Norm::weighted_p(p, w); });
  }
  if (type == "ellipsoid") {
    const Json& A = member(j, "A", field);
    if (!A.is_array() || A.empty()) fail(field + ".A", "expected a square matrix");
    const auto n = static_cast<Eigen::Index>(A.size());
    Eigen::MatrixXd M(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const std::string rf = field + ".A[" + std::to_string(r) + "]";
      const Vector row = vector_from_json(A[static_cast<std::size_t>(r)], rf);
      if (row.size() != n) fail(rf, "expected a square matrix");
      M.row(r) = row.transpose();
    }
    return tagged(field, [&] { return Norm::ellipsoidal(M); });
  }
  fail(field + ".type", "unknown norm type '" + type + "'");
}

ConvexBody body_from_json(const Json& j, const Norm& ambient, const Tolerances& tol, const std::string& field) {
  const std::string type = type_of(j, field);
  const int n = ambient.dimension();
  auto local_norm = [&]() {
    if (j.contains("norm")) return norm_from_json(j["norm"], n, tol, field + ".norm");
    return ambient;
  };
  if (type == "polytope") {
    std::vector<Vector> verts = vector_list(member(j, "vertices", field), field + ".vertices");
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (verts[i].size() != n)
        fail(field + ".vertices[" + std::to_string(i) + "]", "dimension does not match the norm");
    return tagged(field, [&] { return ConvexBody::polytope(std::move(verts), tol); });
  }
  if (type == "ball") {
    const Vector c = vector_from_json(member(j, "center", field), field + ".center");
    if (c.size() != n) fail(field + ".center", "dimension does not match the norm");
    const double r = number(member(j, "radius", field), field + ".radius");
    const Norm M = local_norm();
    return tagged(field, [&] { return ConvexBody::ball(c, r, M, tol); });
  }
  if (type == "parallel") {
    const ConvexBody base = body_from_json(member(j, "base", field), ambient, tol, field + ".base");
    const double delta = number(member(j, "delta", field), field + ".delta");
    const Norm M = local_norm();
    return tagged(field, [&] { return ConvexBody::parallel(base, delta, M, tol); });
  }
  fail(field + ".type", "unknown body type '" + type + "'");
}

ConvexFunction function_from_json(const Json& j, const Norm& ambient, const Tolerances& tol,
                                  const std::string& field) {
  if (j.is_object() && j.contains("f") && !j.contains("type")) return function_from_json(j["f"], ambient, tol, field);
  const std::string type = type_of(j, field);
  const int n = ambient.dimension();
  if (type == "max_affine") {
    const Json& pieces = member(j, "pieces", field);
    if (!pieces.is_array() || pieces.empty()) fail(field + ".pieces", "expected a nonempty array");
    std::vector<AffinePiece> out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const std::string pf = field + ".pieces[" + std::to_string(i) + "]";
      const Functional phi = functional_from_json(member(pieces[i], "phi", pf), pf + ".phi");
      if (phi.dimension() != n) fail(pf + ".phi", "dimension does not match the norm");
      const double b = pieces[i].contains("b") ? number(pieces[i]["b"], pf + ".b") : 0.0;
      out.push_back({phi, b});
    }
    return tagged(field, [&] { return ConvexFunction::max_affine(std::move(out)); });
  }
  if (type == "distance") {
    const Norm M = j.contains("norm") ? norm_from_json(j["norm"], n, tol, field + ".norm") : ambient;
    const ConvexBody K = body_from_json(member(j, "body", field), M, tol, field + ".body");
    return tagged(field, [&] { return ConvexFunction::distance_to(K, M, tol); });
  }
  fail(field + ".type", "unknown function type '" + type + "'");
}

MonotoneData monotone_from_json(const Json& j, const std::string& field) {
  MonotoneData S;
  const Json* list = &j;
  if (j.is_object()) {
    list = &member(j, "pairs", field);
    if (j.contains("base_index")) {
      if (!j["base_index"].is_number_integer()) fail(field + ".base_index", "expected an integer");
      S.base_index = j["base_index"].get<int>();
    }
  }
  if (!list->is_array() || list->empty()) fail(field, "expected a nonempty array of pairs");
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string pf = field + "[" + std::to_string(i) + "]";
    const Json& p = (*list)[i];
    if (p.is_object())
      S.pairs.push_back({vector_from_json(member(p, "x", pf), pf + ".x"), vector_from_json(member(p, "w", pf), pf + ".w")});
    else if (p.is_array() && p.size() == 2)
      S.pairs.push_back({vector_from_json(p[0], pf + "[0]"), vector_from_json(p[1], pf + "[1]")});
    else
      fail(pf, "expected {\"x\":[...],\"w\":[...]} or [[x...],[w...]]");
  }
  tagged(field, [&] {
    S.validate();
    return 0;
  });
  return S;
}

Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) fail("scenario", "expected an object");
  Scenario s;
  s.norm = member(j, "norm", "scenario");
  if (j.contains("body")) s.body = j["body"];
  if (j.contains("function")) s.function = j["function"];
  if (j.contains("f")) s.function = j["f"];
  for (const char* key : {"points", "vectors"}) {
    if (!j.contains(key)) continue;
    const Json& group = j[key];
    if (!group.is_object()) fail(key, "expected an object of named vector lists");
    auto& dest = std::string(key) == "points" ? s.points : s.vectors;
    for (const auto& [name, val] : group.items()) dest[name] = vector_list(val, std::string(key) + "." + name);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerances")) s.tolerances = tolerances_from_json(j["tolerances"]);
  return s;
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const Functional& phi) { return Json{{"dual", to_json(Vector(phi.coeffs()))}}; }

Json to_json(const Hyperplane& h) { return Json{{"normal", to_json(Vector(h.normal().coeffs()))}, {"offset", h.offset()}}; }

Json to_json(const Tolerances& t) {
  return Json{{"eq_tol", t.eq_tol}, {"fd_step", t.fd_step}, {"opt_gap", t.opt_gap}, {"max_iter", t.max_iter}};
}

Json to_json(const ProjectionResult& r) {
  Json j{{"point", to_json(r.point)}, {"distance", r.distance}, {"gap", r.gap}, {"iterations", r.iterations}};
  j["outer_normal"] = r.outer_normal ? to_json(*r.outer_normal) : Json(nullptr);
  j["certified"] = r.certified;
  j["boundary_band"] = r.boundary_band;
  return j;
}

Json to_json(const OrthogonalityReport& r) {
  return Json{{"holds", r.holds},
              {"residual", r.residual},
              {"witness_t", r.witness_t},
              {"variational_gap", r.variational_gap}};
}

Json to_json(const SubgradientCertificate& c) {
  Json j{{"point", to_json(c.point)},
         {"candidate", to_json(c.candidate)},
         {"verdict", to_string(c.verdict)},
         {"worst_direction", c.worst_direction.size() ? to_json(c.worst_direction) : Json(nullptr)},
         {"margin", c.margin}};
  j["exact"] = c.exact ? Json(*c.exact) : Json(nullptr);
  return j;
}

Json to_json(const EstimateReport& r) {
  return Json{{"sup_minus", r.sup_minus},
              {"lower", r.lower},
              {"inf_plus", r.inf_plus},
              {"holds", r.holds},
              {"slack", r.slack}};
}

Json to_json(const MonotoneReport& r) {
  return Json{{"ok", r.ok}, {"worst_cycle", r.worst_cycle}, {"slack", r.slack}};
}

Json function_to_json(const ConvexFunction& f) {
  const auto* ma = std::get_if<function_kind::MaxAffine>(&f.kind());
  if (ma == nullptr) throw DomainError("only max-affine functions have a JSON form");
  Json pieces = Json::array();
  for (const auto& p : ma->pieces) pieces.push_back(Json{{"phi", to_json(Vector(p.phi.coeffs()))}, {"b", p.b}});
  return Json{{"type", "max_affine"}, {"pieces", pieces}};
}

}  // namespace minkowski::io
