#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "json.hpp"

namespace fibra::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("fibra_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    for (const char* name : {"motivating", "string-n2", "parallel-pair", "ten", "ten-mixed", "string-n2-s1"}) {
      const Result r = invoke({"fixtures", "export", name, (dir_ / name).string()});
      ASSERT_EQ(r.code, 0) << r.err;
    }
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string path(const std::string& bundle, const std::string& file) { return (dir_ / bundle / file).string(); }

  static std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static fs::path dir_;
};

fs::path CliTest::dir_;

TEST_F(CliTest, CheckFibrationHolds) {
  const Result r = invoke({"check-fibration", path("motivating", "g3.network.json"), path("motivating", "loop.network.json"),
                           path("motivating", "phi.map.json")});
  ASSERT_EQ(r.code, kHolds) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["command"], "check-fibration");
  EXPECT_EQ(j["results"]["is_fibration"], true);
  EXPECT_EQ(j["inputs"].size(), 3u);
  EXPECT_EQ(j["inputs"][0]["sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(j["version"], kVersion);
}

TEST_F(CliTest, CheckFibrationFailsWithLiftCounts) {
  const Result r = invoke({"check-fibration", path("parallel-pair", "pair.network.json"),
                           path("parallel-pair", "loop.network.json"), path("parallel-pair", "collapse.map.json")});
  ASSERT_EQ(r.code, kFails);
  const json f = r.report()["results"]["failures"];
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[1]["node"], "b");
  EXPECT_EQ(f[1]["lift_count"], 2);
}

TEST_F(CliTest, CoarsestOnStringGraph) {
  const Result r = invoke({"balanced", "--coarsest", path("string-n2", "string.network.json")});
  ASSERT_EQ(r.code, kHolds) << r.err;
  EXPECT_EQ(r.report()["results"]["blocks"], json::parse(R"([["1","3"],["2","4"]])"));
}

TEST_F(CliTest, BalancedCheck) {
  const std::string good = write("good.json", R"({"blocks": [["1","3"],["2","4"]]})");
  const std::string bad = write("bad.json", R"({"blocks": [["1"],["3"],["2","4"]]})");
  const std::string net = path("string-n2", "string.network.json");
  EXPECT_EQ(invoke({"balanced", "--check", good, net}).code, kHolds);
  const Result r = invoke({"balanced", "--check", bad, net});
  EXPECT_EQ(r.code, kFails);
  EXPECT_EQ(r.report()["results"]["witness"], json::parse(R"(["2","4"])"));
  const std::string mixed = write("mixed.json", R"({"blocks": [["1","2","3","4"]]})");
  EXPECT_EQ(invoke({"balanced", "--check", mixed, net}).code, kMalformed);
  EXPECT_EQ(invoke({"quotient", net, "--partition", bad}).code, kFails);
  EXPECT_EQ(invoke({"quotient", net, "--partition", good}).code, kHolds);
}

TEST_F(CliTest, ValidateReportsViolations) {
  const std::string broken = write("broken.json", R"({"nodes": [{"id": "a", "space": {"kind": "R", "dim": 1}}],
    "edges": [{"id": "e", "src": "a", "tgt": "z"}]})");
  const Result r = invoke({"validate", broken});
  EXPECT_EQ(r.code, kFails);
  EXPECT_EQ(r.report()["results"]["violations"][0]["code"], "edge-tgt-unknown");
  EXPECT_EQ(invoke({"validate", path("motivating", "g3.network.json")}).code, kHolds);
  EXPECT_EQ(invoke({"input-trees", broken}).code, kMalformed);
}

TEST_F(CliTest, MalformedInputsExitTwo) {
  EXPECT_EQ(invoke({"validate", write("junk.json", "{not json")}).code, kMalformed);
  EXPECT_EQ(invoke({"validate", (dir_ / "missing.json").string()}).code, kMalformed);
  EXPECT_EQ(invoke({"validate", write("nospace.json", R"({"nodes":[{"id":"a"}],"edges":[]})")}).code, kMalformed);
  EXPECT_EQ(invoke({"frobnicate"}).code, kMalformed);
  EXPECT_EQ(invoke({}).code, kMalformed);
  const std::string bad_dyn = write("bad_dyn.json", R"({"classes":[{"representative":"a","exprs":["inputs[R1]"]}]})");
  const Result r = invoke({"pullback", path("motivating", "g3.network.json"), path("motivating", "c2.network.json"),
                           path("motivating", "psi.map.json"), bad_dyn});
  EXPECT_EQ(r.code, kMalformed);
  EXPECT_NE(r.err.find("input reference outside aggregator"), std::string::npos) << r.err;
}

TEST_F(CliTest, CheckMapReportsNonHomomorphism) {
  const std::string m = write("notmap.json", R"({"nodes":{"1":"a","2":"b","3":"b"},"edges":{"e1_2":"ab","e2_1":"ba","e2_3":"ba"}})");
  const Result r = invoke({"check-map", path("motivating", "g3.network.json"), path("motivating", "c2.network.json"), m});
  EXPECT_EQ(r.code, kFails);
  EXPECT_EQ(invoke({"check-fibration", path("motivating", "g3.network.json"), path("motivating", "c2.network.json"), m}).code,
            kMalformed);
}

TEST_F(CliTest, GroupoidAndInputTrees) {
  const Result g = invoke({"groupoid", path("ten", "ten.network.json")});
  ASSERT_EQ(g.code, kHolds);
  EXPECT_EQ(g.report()["results"]["classes"].size(), 1u);
  const Result t = invoke({"input-trees", path("ten-mixed", "ten.network.json")});
  ASSERT_EQ(t.code, kHolds);
  EXPECT_EQ(t.report()["results"]["trees"].size(), 10u);
}

TEST_F(CliTest, EssentialImageAndFactorize) {
  const std::vector<std::string> files{path("ten-mixed", "g3.network.json"), path("ten-mixed", "ten.network.json"),
                                       path("ten-mixed", "i.map.json")};
  std::vector<std::string> args{"essential-image"};
  args.insert(args.end(), files.begin(), files.end());
  const Result r = invoke(args);
  ASSERT_EQ(r.code, kHolds) << r.err;
  EXPECT_EQ(r.report()["results"]["essential_image"], json::parse(R"(["1","2","3"])"));
  EXPECT_EQ(r.report()["results"]["essentially_surjective"], false);
  args[0] = "factorize";
  const Result f = invoke(args);
  ASSERT_EQ(f.code, kHolds) << f.err;
  EXPECT_EQ(f.report()["results"]["image"]["nodes"].size(), 3u);
}

TEST_F(CliTest, VerifyCommands) {
  const std::vector<std::string> base{path("motivating", "g3.network.json"), path("motivating", "c2.network.json"),
                                      path("motivating", "psi.map.json"), path("motivating", "linear-c2.dynamics.json")};
  auto with = [&](std::vector<std::string> head, std::vector<std::string> tail) {
    head.insert(head.end(), base.begin(), base.end());
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
  };
  const std::string x0c = write("x0c.json", R"({"a": [0.3], "b": [-0.1]})");
  const Result c = invoke(with({"verify", "conjugacy"}, {"--x0", x0c, "--samples", "200"}));
  ASSERT_EQ(c.code, kHolds) << c.err;
  EXPECT_EQ(c.report()["results"]["samples"], 200);
  EXPECT_LE(c.report()["results"]["flow_max_deviation"].get<double>(), 1e-8);

  const std::string on = write("on.json", "[0.2, -0.4, 0.2]");
  const std::string off = write("off.json", "[0.2, -0.4, 0.3]");
  EXPECT_EQ(invoke(with({"verify", "polydiagonal"}, {"--x0", on, "--T", "2"})).code, kHolds);
  EXPECT_EQ(invoke(with({"verify", "polydiagonal"}, {"--x0", off, "--T", "2"})).code, kMalformed);

  const Result d = invoke({"verify", "driving", path("motivating", "c2.network.json"), path("motivating", "g3.network.json"),
                           path("motivating", "tau.map.json"), path("motivating", "linear-g3.dynamics.json"),
                           "--samples", "50"});
  ASSERT_EQ(d.code, kHolds) << d.err;
  EXPECT_EQ(d.report()["results"]["no_feedback"], true);
}

TEST_F(CliTest, PullbackEmitsDomainDynamics) {
  const Result r = invoke({"pullback", path("string-n2", "string.network.json"), path("string-n2", "cycle.network.json"),
                           path("string-n2", "phi.map.json"), path("string-n2", "linear-cycle.dynamics.json")});
  ASSERT_EQ(r.code, kHolds) << r.err;
  const json dyn = r.report()["results"];
  EXPECT_EQ(dyn["nodes"].size(), 4u);
  // The emitted dynamics load back onto the domain network.
  const std::string saved = write("pulled.json", dyn.dump());
  const std::string x0 = write("x0s.json", R"({"1":[0.1],"2":[0.2,0.3],"3":[0.4],"4":[0.5,0.6]})");
  const std::string csv = (dir_ / "traj.csv").string();
  const Result s = invoke({"simulate", path("string-n2", "string.network.json"), saved, "--x0", x0, "--T", "0.01", "--h",
                           "0.001", "--out", csv});
  ASSERT_EQ(s.code, kHolds) << s.err;
  EXPECT_EQ(s.report()["results"]["steps"], 10);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,1[0],2[0],2[1],3[0],4[0],4[1]");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 11);
}

TEST_F(CliTest, ReportsAreDeterministic) {
  const std::vector<std::string> args{"verify", "conjugacy", path("string-n2-s1", "string.network.json"),
                                      path("string-n2-s1", "cycle.network.json"), path("string-n2-s1", "phi.map.json"),
                                      path("string-n2-s1", "kuramoto-cycle.dynamics.json"), "--seed", "9"};
  const Result a = invoke(args);
  const Result b = invoke(args);
  ASSERT_EQ(a.code, kHolds) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.report()["seed"], 9);
}

TEST_F(CliTest, SeedFromEnvironment) {
  const std::vector<std::string> args{"verify", "conjugacy", path("motivating", "g3.network.json"),
                                      path("motivating", "c2.network.json"), path("motivating", "psi.map.json"),
                                      path("motivating", "linear-c2.dynamics.json"), "--samples", "10"};
  ::setenv("FIBRA_SEED", "77", 1);
  const Result env = invoke(args);
  std::vector<std::string> explicit_seed = args;
  explicit_seed.insert(explicit_seed.end(), {"--seed", "5"});
  const Result flag = invoke(explicit_seed);
  ::setenv("FIBRA_SEED", "banana", 1);
  const Result bad = invoke(args);
  ::unsetenv("FIBRA_SEED");
  EXPECT_EQ(env.report()["seed"], 77);
  EXPECT_EQ(flag.report()["seed"], 5);
  EXPECT_EQ(bad.code, kMalformed);
  EXPECT_EQ(invoke(args).report()["seed"], 0);
}

TEST_F(CliTest, OutFlagWritesReport) {
  const std::string out = (dir_ / "report.json").string();
  const Result r = invoke({"fixtures", "list", "--out", out});
  ASSERT_EQ(r.code, kHolds);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  const json j = json::parse(in);
  EXPECT_FALSE(j["results"]["fixtures"].empty());
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace fibra::cli
