#include <sstream>

#include "doctest.h"
#include "minkowski/cli.hpp"
#include "minkowski/io.hpp"

using namespace minkowski;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kSquare = R"({"type":"polytope","vertices":[[1,1],[1,-1],[-1,1],[-1,-1]]})";
const std::string kAbsX1 = R"({"type":"max_affine","pieces":[{"phi":[1,0],"b":0},{"phi":[-1,0],"b":0}]})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("project example") {
    const Outcome o = run({"project", "--norm", R"({"type":"p","p":4})", "--body", kSquare, "--x", "3,0"});
    REQUIRE(o.code == cli::kExitOk);
    const io::Json j = io::Json::parse(o.out);
    CHECK(j["point"][0].get<double>() == doctest::Approx(1.0));
    CHECK(j["point"][1].get<double>() == doctest::Approx(0.0));
    CHECK(j["distance"].get<double>() == doctest::Approx(2.0));
    CHECK(j["certified"].get<bool>());
  }

  TEST_CASE("legendre example") {
    const Outcome o = run({"legendre", "--norm", "euclidean", "--x", "3,4"});
    REQUIRE(o.code == cli::kExitOk);
    const io::Json j = io::Json::parse(o.out);
    CHECK(j["L"] == io::Json::parse("[3.0,4.0]"));
    CHECK(j["dual_norm"].get<double>() == 5.0);
  }

  TEST_CASE("sub-differential commands") {
    const Outcome chk = run({"subdiff", "check", "--norm", "euclidean", "--f", kAbsX1, "--x", "0,0", "--v", "2,0"});
    CHECK(chk.code == cli::kExitOk);
    CHECK(io::Json::parse(chk.out)["verdict"] == "non-member");
    const Outcome con = run({"subdiff", "construct", "--norm", "euclidean", "--f", kAbsX1, "--x", "0,0", "--u", "1,0"});
    CHECK(con.code == cli::kExitOk);
    CHECK(io::Json::parse(con.out)["subgradient"] == io::Json::parse("[1.0,0.0]"));
  }

  TEST_CASE("rockafellar exit codes") {
    const Outcome ok = run({"rockafellar", "--norm", "euclidean", "--pairs", R"([{"x":[0,0],"w":[0,0]},{"x":[1,0],"w":[1,0]}])"});
    CHECK(ok.code == cli::kExitOk);
    CHECK(io::Json::parse(ok.out)["ok"].get<bool>());
    const Outcome bad = run({"rockafellar", "--norm", "euclidean", "--pairs", R"([{"x":[0,0],"w":[1,0]},{"x":[1,0],"w":[-1,0]}])"});
    CHECK(bad.code == cli::kExitInvariant);
    const io::Json j = io::Json::parse(bad.out);
    CHECK_FALSE(j["ok"].get<bool>());
    CHECK(j["slack"].get<double>() > 0.0);
  }

  TEST_CASE("input errors exit with the parse code") {
    CHECK(run({"project", "--norm", R"({"type":"p","p":0.5})", "--body", kSquare, "--x", "3,0"}).code == cli::kExitParse);
    CHECK(run({"legendre", "--norm", "euclidean", "--x", "3,4,5,oops"}).code == cli::kExitParse);
    CHECK(run({"project", "--norm", "euclidean", "--body", kSquare, "--x", "3,0,1"}).code == cli::kExitParse);
    CHECK(run({"no-such-command"}).code == cli::kExitParse);
    const Outcome o = run({"norm", "--norm", "{not json", "--x", "1,1"});
    CHECK(o.code == cli::kExitParse);
    CHECK_FALSE(o.err.empty());
  }

  TEST_CASE("output is deterministic") {
    const std::vector<std::string> args{"subdiff", "estimate", "--norm", R"({"type":"p","p":1.5})", "--f", kAbsX1,
                                        "--x", "0,0", "--v", "0.3,0", "--seed", "9"};
    CHECK(run(args).out == run(args).out);
  }

  TEST_CASE("verify legendre suite passes") {
    const Outcome o = run({"verify", "--suite", "legendre", "--seed", "7"});
    CHECK(o.code == cli::kExitOk);
    CHECK(io::Json::parse(o.out)["failures"].empty());
  }

  TEST_CASE("levelset emits csv rows") {
    const Outcome o = run({"levelset", "--norm", "euclidean", "--body", kSquare, "--levels", "1,2", "--samples", "4"});
    CHECK(o.code == cli::kExitOk);
    CHECK(std::count(o.out.begin(), o.out.end(), '\n') == 9);
  }
}
