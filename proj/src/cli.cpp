#include "minkowski/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "minkowski/io.hpp"
#include "minkowski/legendre.hpp"
#include "minkowski/verify.hpp"

namespace minkowski::cli {

namespace {

using io::Json;

struct Options {
  std::string scenario;
  std::string norm;
  std::string body;
  std::string f;
  std::string tolerances;
  std::string x, y, v, u, phi, h;
  std::string pairs;
  std::string levels = "1";
  std::string suite = "all";
  int samples = 720;
  int m = 64;
  int base = -1;
  std::uint64_t seed = 0;
};

// Everything a command needs, with the scenario file applied under the flags.
class Context {
 public:
  Context(const Options& o, const CLI::App& sub) : o_(o), sub_(sub) {
    if (!o.scenario.empty()) {
      std::ifstream in(o.scenario);
      if (!in) throw ParseError("scenario: cannot open '" + o.scenario + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      Json j;
      try {
        j = Json::parse(buf.str());
      } catch (const Json::parse_error& e) {
        throw ParseError(std::string("scenario: invalid JSON: ") + e.what());
      }
      scenario_ = io::scenario_from_json(j);
      tol_ = scenario_->tolerances;
      seed_ = scenario_->seed;
    }
    if (given("--tolerances")) tol_ = io::tolerances_from_json(io::parse_json_text(o.tolerances, "tolerances"), tol_);
    if (given("--seed")) seed_ = o.seed;
  }

  bool given(const char* flag) const {
    const CLI::Option* opt = sub_.get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  }

  // A named vector flag, falling back to the scenario's first point/vector of
  // the same name.
  Vector vec(const char* name, const std::string& text) const {
    const std::string flag = std::string("--") + name;
    if (given(flag.c_str())) return io::parse_vector_text(text, name);
    if (scenario_) {
      for (const auto* group : {&scenario_->points, &scenario_->vectors}) {
        auto it = group->find(name);
        if (it != group->end() && !it->second.empty()) return it->second.front();
      }
    }
    throw ParseError(flag + ": missing");
  }

  Norm norm(std::optional<int> dim) const {
    Json spec;
    if (given("--norm"))
      spec = io::parse_json_text(o_.norm, "norm");
    else if (scenario_)
      spec = scenario_->norm;
    else
      throw ParseError("--norm: missing");
    return io::norm_from_json(spec, dim, tol_);
  }

  ConvexBody body(const Norm& N) const {
    if (given("--body")) return io::body_from_json(io::parse_json_text(o_.body, "body"), N, tol_);
    if (scenario_ && scenario_->body) return io::body_from_json(*scenario_->body, N, tol_);
    throw ParseError("--body: missing");
  }

  ConvexFunction function(const Norm& N) const {
    if (given("--f")) return io::function_from_json(io::parse_json_text(o_.f, "f"), N, tol_);
    if (scenario_ && scenario_->function) return io::function_from_json(*scenario_->function, N, tol_);
    throw ParseError("--f: missing");
  }

  const Tolerances& tol() const { return tol_; }
  std::uint64_t seed() const { return seed_; }
  const Options& opts() const { return o_; }

 private:
  const Options& o_;
  const CLI::App& sub_;
  std::optional<io::Scenario> scenario_;
  Tolerances tol_;
  std::uint64_t seed_ = 0;
};

void emit(std::ostream& out, const Json& j) { out << j.dump() << "\n"; }

int cmd_norm(const Context& c, std::ostream& out) {
  const Vector x = c.vec("x", c.opts().x);
  const Norm N = c.norm(static_cast<int>(x.size()));
  require_dimension(N.dimension(), static_cast<int>(x.size()), "x");
  Json j{{"norm", N(x)}};
  j["differential"] = x.norm() < 1e-10 ? Json(nullptr) : io::to_json(norm_grad(N, x));
  emit(out, j);
  return kExitOk;
}

int cmd_legendre(const Context& c, std::ostream& out) {
  if (c.given("--phi")) {
    const Vector coeffs = io::parse_vector_text(c.opts().phi, "phi");
    const Norm N = c.norm(static_cast<int>(coeffs.size()));
    require_dimension(N.dimension(), static_cast<int>(coeffs.size()), "phi");
    const Functional phi(coeffs);
    emit(out, Json{{"x", io::to_json(legendre_inverse(N, phi, c.tol()))}, {"dual_norm", dual_norm(N, phi, c.tol())}});
    return kExitOk;
  }
  const Vector x = c.vec("x", c.opts().x);
  const Norm N = c.norm(static_cast<int>(x.size()));
  require_dimension(N.dimension(), static_cast<int>(x.size()), "x");
  const Functional L = legendre(N, x);
  emit(out, Json{{"L", io::to_json(Vector(L.coeffs()))}, {"dual_norm", dual_norm(N, L, c.tol())}});
  return kExitOk;
}

int cmd_birkhoff(const Context& c, std::ostream& out) {
  const Vector x = c.vec("x", c.opts().x);
  const Norm N = c.norm(static_cast<int>(x.size()));
  require_dimension(N.dimension(), static_cast<int>(x.size()), "x");
  if (c.given("--hyperplane")) {
    const Hyperplane h = io::hyperplane_from_json(io::parse_json_text(c.opts().h, "hyperplane"), "hyperplane");
    emit(out, io::to_json(birkhoff_vh(N, x, h, c.tol())));
  } else {
    emit(out, io::to_json(birkhoff_vv(N, x, c.vec("y", c.opts().y), c.tol())));
  }
  return kExitOk;
}

int cmd_project(const Context& c, std::ostream& out) {
  const Vector x = c.vec("x", c.opts().x);
  const Norm N = c.norm(static_cast<int>(x.size()));
  const ConvexBody K = c.body(N);
  const ProjectionResult r = project(N, K, x, c.tol());
  emit(out, io::to_json(r));
  return r.certified ? kExitOk : kExitNotCertified;
}

int cmd_distance(const Context& c, std::ostream& out) {
  const Vector x = c.vec("x", c.opts().x);
  const Norm N = c.norm(static_cast<int>(x.size()));
  const ConvexBody K = c.body(N);
  const ProjectionResult r = project(N, K, x, c.tol());
  Json j{{"distance", r.distance}};
  try {
    j["gradient"] = io::to_json(distance_gradient(N, K, x, c.tol()));
  } catch (const NonDifferentiableError&) {
    j["gradient"] = nullptr;
  }
  j["certified"] = r.certified;
  emit(out, j);
  return r.certified ? kExitOk : kExitNotCertified;
}

// Boundary of {d_K <= c} along rays from the center of K, by bisection on
// the ray parameter (d_K is nondecreasing along rays leaving the center).
int cmd_levelset(const Context& c, std::ostream& out) {
  const Norm N = c.norm(2);
  if (N.dimension() != 2) throw DimensionError("levelset supports 2D only");
  const ConvexBody K = c.body(N);
  const Vector levels = io::parse_vector_text(c.opts().levels, "levels");
  const int samples = c.opts().samples;
  if (samples < 1) throw ParseError("--samples: must be positive");
  const Vector center = K.center();
  std::ostringstream csv;
  csv.precision(17);
  csv << "level,ray_index,x1,x2\n";
  for (Eigen::Index li = 0; li < levels.size(); ++li) {
    const double level = levels(li);
    if (level < 0.0) throw ParseError("--levels: must be nonnegative");
    for (int k = 0; k < samples; ++k) {
      const double a = 2.0 * std::numbers::pi * k / samples;
      Vector u(2);
      u << std::cos(a), std::sin(a);
      auto excess = [&](double s) {
        const Vector p = center + s * u;
        return level == 0.0 ? -K.slack(p) : distance(N, K, p, c.tol()) - level;
      };
      double lo = 0.0;
      double hi = 1.0;
      while (excess(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
      }
      for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) <= 0.0 ? lo : hi) = mid;
      }
      const Vector p = center + 0.5 * (lo + hi) * u;
      csv << level << "," << k << "," << p(0) << "," << p(1) << "\n";
    }
  }
  out << csv.str();
  return kExitOk;
}

int cmd_subdiff_check(const Context& c, std::ostream& out) {
  const Vector x = c.vec("x", c.opts().x);
  const Norm N = c.norm(static_cast<int>(x.size()));
  const ConvexFunction f = c.function(N);
  const Vector v = c.vec("v", c.opts().v);
  emit(out, io::to_json(subgradient_member(f, x, v, N, c.opts().m, c.seed())));
  return kExitOk;
}

int cmd_subdiff_construct(const Context& c, std::ostream& out) {
  const Vector x = c.vec("x", c.opts().x);
  const Norm N = c.norm(static_cast<int>(x.size()));
  const ConvexFunction f = c.function(N);
  const Vector u = c.vec("u", c.opts().u);
  const Vector w = subgradient_construct(f, x, u, N);
  emit(out, Json{{"subgradient", io::to_json(w)},
                 {"L_w_u", legendre(N, w)(u)},
                 {"f_plus", dir_deriv_plus(f, x, u)}});
  return kExitOk;
}

int cmd_subdiff_estimate(const Context& c, std::ostream& out) {
  const Vector x = c.vec("x", c.opts().x);
  const Norm N = c.norm(static_cast<int>(x.size()));
  const ConvexFunction f = c.function(N);
  const Vector v = c.vec("v", c.opts().v);
  const EstimateReport r = estimate_check(f, x, v, N, c.opts().m, c.seed());
  emit(out, io::to_json(r));
  return r.holds ? kExitOk : kExitInvariant;
}

int cmd_rockafellar(const Context& c, std::ostream& out) {
  if (!c.given("--pairs")) throw ParseError("--pairs: missing");
  MonotoneData S = io::monotone_from_json(io::parse_json_text(c.opts().pairs, "pairs"));
  if (c.given("--base")) S.base_index = c.opts().base;
  S.validate();
  const Norm N = c.norm(S.dimension());
  const MonotoneReport rep = cyclic_monotone_check(S, N, c.tol());
  Json j = io::to_json(rep);
  if (!rep.ok) {
    j["f"] = nullptr;
    emit(out, j);
    return kExitInvariant;
  }
  j["f"] = io::function_to_json(rockafellar_potential(S, N, c.tol()));
  emit(out, j);
  return kExitOk;
}

int cmd_verify(const Context& c, std::ostream& out) {
  const VerifyReport r = run_suite(c.opts().suite, c.seed());
  emit(out, r.to_json());
  return r.passed() ? kExitOk : kExitInvariant;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Computational geometry of finite-dimensional normed spaces", "minkowski"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* s) {
    s->add_option("--scenario", o.scenario, "Scenario JSON file supplying defaults");
    s->add_option("--norm", o.norm, "Norm spec (JSON) or 'euclidean'");
    s->add_option("--tolerances", o.tolerances, "Tolerance overrides (JSON)");
    s->add_option("--seed", o.seed, "Random seed");
  };
  auto* norm = app.add_subcommand("norm", "Norm value and differential at x");
  common(norm);
  norm->add_option("--x", o.x, "Point, e.g. \"1,1\"");

  auto* leg = app.add_subcommand("legendre", "Legendre transform L(x), or L^-1(phi) with --phi");
  common(leg);
  leg->add_option("--x", o.x, "Point");
  leg->add_option("--phi", o.phi, "Functional coefficients");

  auto* bir = app.add_subcommand("birkhoff", "Birkhoff orthogonality of x to y (or to --hyperplane)");
  common(bir);
  bir->add_option("--x", o.x, "Left vector");
  bir->add_option("--y", o.y, "Right vector");
  bir->add_option("--hyperplane", o.h, "Hyperplane JSON {\"normal\":[...],\"offset\":0}");

  auto* proj = app.add_subcommand("project", "Metric projection onto a body");
  common(proj);
  proj->add_option("--body", o.body, "Body spec (JSON)");
  proj->add_option("--x", o.x, "Point");

  auto* dist = app.add_subcommand("distance", "Distance to a body and its norm gradient");
  common(dist);
  dist->add_option("--body", o.body, "Body spec (JSON)");
  dist->add_option("--x", o.x, "Point");

  auto* lvl = app.add_subcommand("levelset", "CSV boundary samples of {d_K <= level} (2D)");
  common(lvl);
  lvl->add_option("--body", o.body, "Body spec (JSON)");
  lvl->add_option("--levels", o.levels, "Comma-separated levels")->capture_default_str();
  lvl->add_option("--samples", o.samples, "Rays per level")->capture_default_str();

  auto* sub = app.add_subcommand("subdiff", "Norm sub-differential operations");
  sub->require_subcommand(1);
  auto* chk = sub->add_subcommand("check", "Sub-gradient membership certificate");
  common(chk);
  chk->add_option("--f", o.f, "Function spec (JSON)");
  chk->add_option("--x", o.x, "Point");
  chk->add_option("--v", o.v, "Candidate");
  chk->add_option("--m", o.m, "Sampled directions")->capture_default_str();
  auto* con = sub->add_subcommand("construct", "Sub-gradient attaining the max formula at u");
  common(con);
  con->add_option("--f", o.f, "Function spec (JSON)");
  con->add_option("--x", o.x, "Point");
  con->add_option("--u", o.u, "Direction");
  auto* est = sub->add_subcommand("estimate", "Sampled estimate chain around v");
  common(est);
  est->add_option("--f", o.f, "Function spec (JSON)");
  est->add_option("--x", o.x, "Point");
  est->add_option("--v", o.v, "Vector");
  est->add_option("--m", o.m, "Sampled hyperplane directions")->capture_default_str();

  auto* rock = app.add_subcommand("rockafellar", "Cyclic monotonicity check and max-affine potential");
  common(rock);
  rock->add_option("--pairs", o.pairs, "Pairs JSON");
  rock->add_option("--base", o.base, "Base pair index");

  auto* ver = app.add_subcommand("verify", "Run invariant suites");
  common(ver);
  ver->add_option("--suite", o.suite, "Suite name or 'all'")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    auto dispatch = [&](CLI::App* s, int (*fn)(const Context&, std::ostream&)) -> std::optional<int> {
      if (!s->parsed()) return std::nullopt;
      const Context c(o, *s);
      return fn(c, out);
    };
    for (auto [s, fn] : std::initializer_list<std::pair<CLI::App*, int (*)(const Context&, std::ostream&)>>{
             {norm, cmd_norm},
             {leg, cmd_legendre},
             {bir, cmd_birkhoff},
             {proj, cmd_project},
             {dist, cmd_distance},
             {lvl, cmd_levelset},
             {chk, cmd_subdiff_check},
             {con, cmd_subdiff_construct},
             {est, cmd_subdiff_estimate},
             {rock, cmd_rockafellar},
             {ver, cmd_verify}}) {
      if (auto code = dispatch(s, fn)) return *code;
    }
    err << "error: no command\n";
    return kExitParse;
  } catch (const MonotonicityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ConvergenceError& e) {
    err << "error: not certified: " << e.what() << "\n";
    return kExitNotCertified;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
}

}  // namespace minkowski::cli
