#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "stateid/cli.hpp"
#include "stateid/gallery.hpp"
#include "stateid/model_io.hpp"

using namespace stateid;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(STATEID_TEST_TMP) / ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    write_text_file(dir_ / name, text);
    return path(name);
  }
  std::string chain_model() const {
    return write("chain.json", write_model(testing_models::chain(Rat(1, 3), Rat(1, 4), Rat(3, 4))));
  }
  std::string flu_model() const {
    const auto& p = builtin_fixture("flu").pairs.at(0);
    return write("flu.json", write_model(p.model_a, p.constraints));
  }

  fs::path dir_;
};

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_F(Cli, Infer) {
  auto m = chain_model();
  auto r = run({"infer", "-m", m, "--targets", "Y", "--given", "X=1"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "3/4"));
  auto e = run({"--json", "infer", "-m", m, "--targets", "X,Y"});
  auto v = run({"--json", "infer", "-m", m, "--targets", "X,Y", "--method", "ve"});
  auto je = parse_json(e.out), jv = parse_json(v.out);
  EXPECT_EQ(je["schema"], "stateid.infer/1");
  EXPECT_EQ(je["rows"], jv["rows"]);
  EXPECT_EQ(je["rows"].size(), 4u);
  EXPECT_EQ(run({"infer", "-m", m, "--targets", "X", "--method", "mc"}).code, kExitInput);
}

TEST_F(Cli, Do) {
  auto m = chain_model();
  auto r = run({"do", "-m", m, "--set", "X=1", "--query", "Y=1"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(contains(r.out, "Pr_{X=1}(Y=1) = 3/4")) << r.out;
  auto j = parse_json(run({"--json", "do", "-m", m, "--set", "X=0", "--query", "Y=1"}).out);
  EXPECT_EQ(j["p"], "1/4");
}

TEST_F(Cli, Check) {
  auto m = flu_model();
  EXPECT_EQ(run({"check", "-m", m}).code, kExitOk);
  auto fd = write("fd.json", R"([{"type": "fd", "child": "R"}])");
  auto r = run({"check", "-m", m, "-c", fd});
  EXPECT_EQ(r.code, kExitFailed);
  EXPECT_TRUE(contains(r.out, "violations"));
}

TEST_F(Cli, SampleIsReproducible) {
  const auto& e = builtin_fixture("flu").estimands.at(0);
  Json g = graph_to_json(e.sampling_graph);
  g["constraints"] = constraints_to_json(e.sampling_constraints);
  auto gp = write("graph.json", dump_json(g));
  ASSERT_EQ(run({"sample", "-g", gp, "--seed", "7", "-o", path("a.json")}).code, kExitOk);
  ASSERT_EQ(run({"sample", "-g", gp, "--seed", "7", "-o", path("b.json")}).code, kExitOk);
  ASSERT_EQ(run({"sample", "-g", gp, "--seed", "8", "-o", path("c.json")}).code, kExitOk);
  EXPECT_EQ(read_text_file(path("a.json")), read_text_file(path("b.json")));
  EXPECT_NE(read_text_file(path("a.json")), read_text_file(path("c.json")));
  auto doc = read_model(read_text_file(path("a.json")));
  EXPECT_TRUE(check_all(doc.model, doc.constraints).ok());
  EXPECT_EQ(doc.model, sample_constrained(e.sampling_graph, e.sampling_constraints, 7));
}

TEST_F(Cli, Feliminate) {
  auto m = flu_model();
  auto r = run({"feliminate", "-m", m, "--var", "F", "--context", "C=0", "-o", path("r.json")});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_TRUE(contains(r.out, "PASS"));
  auto reduced = read_model(read_text_file(path("r.json"))).model;
  EXPECT_FALSE(reduced.graph().find("F").has_value());
  EXPECT_EQ(run({"feliminate", "-m", m, "--var", "F", "--context", "C=1"}).code, kExitInput);
}

TEST_F(Cli, ExtendAndPermute) {
  auto m = chain_model();
  ASSERT_EQ(run({"extend-state", "-m", m, "--var", "Y", "--base", "1", "--eps", "1/3", "-o", path("e.json")}).code,
            kExitOk);
  auto e = read_model(read_text_file(path("e.json"))).model;
  EXPECT_EQ(e.graph().variable("Y").card(), 3u);
  EXPECT_EQ(run({"extend-state", "-m", m, "--var", "Y", "--base", "1", "--eps", "1"}).code, kExitInput);
  ASSERT_EQ(run({"permute", "-m", m, "--var", "X", "--map", "0:1,1:0", "-o", path("p.json")}).code, kExitOk);
  auto p = read_model(read_text_file(path("p.json"))).model;
  EXPECT_EQ(p.cpt("X").at(0, 0), Rat(1, 3));
  EXPECT_EQ(run({"permute", "-m", m, "--var", "X", "--map", "0:1,1:1"}).code, kExitInput);
}

TEST_F(Cli, EvalEstimand) {
  auto m = chain_model();
  auto r = run({"eval-estimand", "-m", m, "--expr", "P(Y=$y | X=$x)", "--bind", "x=1,y=1"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "3/4"));
  auto f = write("f.txt", "sum_{X} (P(X) * P(Y=1 | X))\n");
  auto j = parse_json(run({"--json", "eval-estimand", "-m", m, "-e", f}).out);
  EXPECT_EQ(j["schema"], "stateid.eval-estimand/1");
  EXPECT_EQ(run({"eval-estimand", "-m", m, "--expr", "P(Y=$y)"}).code, kExitInput);
  EXPECT_EQ(run({"eval-estimand", "-m", m, "--expr", "P(Y=0", "--bind", ""}).code, kExitInput);
  EXPECT_EQ(run({"eval-estimand", "-m", m, "-e", f, "--expr", "1"}).code, kExitInput);
}

TEST_F(Cli, VerifyPairShowsObservedFamilies) {
  const auto& p = builtin_fixture("flu").pairs.at(0);
  auto pp = write("pair.json", dump_json(pair_to_json(p)));
  auto r = run({"verify-pair", "-p", pp});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_TRUE(contains(r.out, "PASS"));
  for (const char* v : {"1/16", "99/800", "1/800"}) EXPECT_TRUE(contains(r.out, v)) << v;
  auto j = parse_json(run({"--json", "verify-pair", "-p", pp}).out);
  EXPECT_EQ(j["pass"], true);

  auto same = p;
  same.model_b = same.model_a;
  auto sp = write("same.json", dump_json(pair_to_json(same)));
  EXPECT_EQ(run({"verify-pair", "-p", sp}).code, kExitFailed);
}

TEST_F(Cli, Gallery) {
  auto l = run({"gallery", "list"});
  EXPECT_EQ(l.code, kExitOk);
  for (const auto& f : builtin_fixtures()) EXPECT_TRUE(contains(l.out, f.id));
  auto v = run({"gallery", "verify", "--id", "salary", "--samples", "3"});
  EXPECT_EQ(v.code, kExitOk) << v.out;
  EXPECT_TRUE(contains(v.out, "PASS  salary"));
  EXPECT_EQ(run({"gallery", "verify", "--id", "nope"}).code, kExitInput);
  ASSERT_EQ(run({"gallery", "export", "--out", path("fx")}).code, kExitOk);
  auto fromdir = run({"gallery", "verify", "--dir", path("fx"), "--id", "flu", "--samples", "2"});
  EXPECT_EQ(fromdir.code, kExitOk) << fromdir.out;
}

TEST_F(Cli, InputErrors) {
  EXPECT_EQ(run({}).code, kExitInput);
  EXPECT_EQ(run({"bogus"}).code, kExitInput);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  auto r = run({"infer", "-m", path("missing.json"), "--targets", "X"});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_TRUE(contains(r.err, "cannot open"));
  auto j = run({"--json", "infer", "-m", path("missing.json"), "--targets", "X"});
  EXPECT_EQ(parse_json(j.out)["error"], "FileFormat");
  auto big = chain_model();
  EXPECT_EQ(run({"--max-states", "2", "infer", "-m", big, "--targets", "X"}).code, kExitInput);
}
